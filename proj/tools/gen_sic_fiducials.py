#!/usr/bin/env python3
# Copyright 2026 The QEstim Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Numerical search for Weyl-Heisenberg covariant SIC fiducial vectors.

Writes data/sic/d<N>.txt with one "re im" pair per line (17 significant
digits). The library only reads these files; it never searches.
"""
import argparse
import pathlib

import numpy as np
from scipy.optimize import least_squares


def displacement_overlaps(psi):
    d = psi.size
    omega = np.exp(2j * np.pi / d)
    phases = omega ** np.arange(d)
    out = []
    for p in range(d):
        shifted = np.roll(psi, p)
        for q in range(d):
            if p == 0 and q == 0:
                continue
            out.append(np.vdot(psi, shifted * phases ** q))
    return np.array(out)


def residual(v, d):
    psi = v[:d] + 1j * v[d:]
    norm2 = np.vdot(psi, psi).real
    ov = np.abs(displacement_overlaps(psi)) ** 2
    return np.concatenate([ov / norm2**2 - 1.0 / (d + 1), [norm2 - 1.0]])


def search(d, rng, restarts):
    best = None
    for _ in range(restarts):
        v0 = rng.normal(size=2 * d)
        sol = least_squares(residual, v0, args=(d,), xtol=1e-15, ftol=1e-15,
                            gtol=1e-15, max_nfev=20000)
        err = np.max(np.abs(residual(sol.x, d)))
        if best is None or err < best[0]:
            best = (err, sol.x)
        if err < 1e-14:
            break
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/sic")
    ap.add_argument("--dmax", type=int, default=16)
    ap.add_argument("--restarts", type=int, default=400)
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for d in range(3, args.dmax + 1):
        err, v = search(d, rng, args.restarts)
        psi = v[:d] + 1j * v[d:]
        psi /= np.linalg.norm(psi)
        psi *= np.exp(-1j * np.angle(psi[0]))
        err = np.max(np.abs(np.abs(displacement_overlaps(psi)) ** 2 - 1.0 / (d + 1)))
        print(f"d={d} max overlap deviation {err:.3e}", flush=True)
        if err > 1e-12:
            raise SystemExit(f"no fiducial found for d={d}")
        with open(out / f"d{d}.txt", "w") as fh:
            fh.write(f"# Weyl-Heisenberg SIC fiducial, d={d}, max overlap deviation {err:.3e}\n")
            for z in psi:
                fh.write(f"{z.real:.17g} {z.imag:.17g}\n")


if __name__ == "__main__":
    main()
