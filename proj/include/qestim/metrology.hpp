// Copyright 2026 The QEstim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "qestim/parallel.hpp"
#include "qestim/scheme.hpp"
#include "qestim/sdp.hpp"

namespace qestim {

enum class LdType { SLD, RLD, LLD };
enum class Quantity { QFIM, CFIM, HCRB, NHB, VTB, QVTB };

const char* to_string(LdType type);
const char* to_string(Quantity quantity);
LdType ld_type_from_name(std::string_view name);

struct SldConfig {
  double eps = 1e-8;  // eigenvalue-sum truncation threshold
  void validate() const;
};

/// Symmetric logarithmic derivative, computed in the eigenbasis of rho.
CMatrix sld(const CMatrix& rho, const CMatrix& drho, const SldConfig& config = {});

/// QFIM of one state. SLD results are real symmetric; RLD and LLD results are
/// Hermitian and carry +inf entries where rho is singular on the support of
/// the derivatives.
CMatrix qfim(const CMatrix& rho, const MatrixList& drho, LdType type = LdType::SLD, const SldConfig& config = {});

/// Real part of the SLD QFIM.
RMatrix qfim_sld(const CMatrix& rho, const MatrixList& drho, const SldConfig& config = {});

/// F(eps) - F(0+): change of the SLD QFIM caused by eigenvalue truncation.
RMatrix truncation_delta(const CMatrix& rho, const MatrixList& drho, const SldConfig& config = {});

/// Outcome probabilities below this are skipped (or flag the entry infinite).
inline constexpr double kProbabilityFloor = 1e-14;

RMatrix cfim(const CMatrix& rho, const MatrixList& drho, const Measurement& measurement);

/// Tr(W F^-1) for real symmetric positive-definite F (scalar 1/F for n = 1).
double weighted_inverse_trace(const RMatrix& f, const RMatrix& w);

struct BoundResult {
  Quantity quantity = Quantity::QFIM;
  std::vector<double> times;
  std::vector<CMatrix> values;  // n x n (1 x 1 for scalars) per time
  std::optional<LdType> ld_type;
  RMatrix weight;                    // HCRB / NHB only
  std::vector<RMatrix> truncation;  // SLD QFIM only

  /// Real part of the value at the last time.
  RMatrix final_value() const { return values.back().real(); }
};

struct BoundOptions {
  LdType ld_type = LdType::SLD;
  SldConfig sld;
  /// Evaluate only at the final time.
  bool final_only = false;
  Execution exec = Execution::Parallel;
  sdp::Options sdp;
  const sdp::Solver* solver = nullptr;  // defaults to the bundled ADMM backend
};

BoundResult qfim(const Trajectory& traj, const BoundOptions& options = {});
BoundResult cfim(const Trajectory& traj, const Measurement& measurement, const BoundOptions& options = {});

BoundResult qfim(const Scheme& scheme, const BoundOptions& options = {});
BoundResult cfim(const Scheme& scheme, const BoundOptions& options = {});

/// Holevo bound for one state.
double hcrb(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options = {},
            const sdp::Solver& solver = sdp::default_solver());

/// Nagaoka-Hayashi bound for one state.
double nhb(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options = {},
           const sdp::Solver& solver = sdp::default_solver());

BoundResult hcrb(const Scheme& scheme, const RMatrix& w, const BoundOptions& options = {});
BoundResult nhb(const Scheme& scheme, const RMatrix& w, const BoundOptions& options = {});

/// Van Trees bounds at the final time; the scheme must carry a prior and be
/// re-bindable at each grid point (parametric Hamiltonian or Kraus channel).
RMatrix vtb(const Scheme& scheme, const BoundOptions& options = {});
RMatrix qvtb(const Scheme& scheme, const BoundOptions& options = {});

/// Prior Fisher information I_p = int (d_a p)(d_b p)/p dx.
RMatrix prior_information(const PriorSpec& prior);

}  // namespace qestim
