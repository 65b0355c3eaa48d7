//
// Copyright 2026 The R-ADMM Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef RADMM_ANALYSIS_H_
#define RADMM_ANALYSIS_H_

#include <memory>
#include <span>
#include <vector>

#include "radmm/objective.h"
#include "radmm/solver.h"
#include "radmm/topology.h"

namespace radmm {

// Convergence-condition checks for the recycled iteration.
//
// Matrix inequalities X > Y are read as: the symmetric part of X - Y is
// positive definite. The reported margin is the smallest eigenvalue of that
// symmetric part, so a condition holds iff its margin is > 0.
//
// With D~(t) = diag(2 eta_i(t) V_i + gamma), W(t) = diag(eta_i(t)),
// D_M = diag(M_i^2) and s = min_i D~(t)_ii:
//   (i)  I + W(t+1)(D+A)D~(t)^-1  >  (L mu / 2s) (W(t+1)(D-A))^+ D_M
//   (ii) W(t+1)(D+A)  >  W(t+1)(D+A)D~(t)^-1 (W(t)(D-A) + (2/L) W(t+1)(D+A))
//                          + (L mu / (2s(mu-1))) D_M
//
// Both conditions need the signless Laplacian D+A to be nonsingular on the
// directions D_M sees, so they cannot hold on a bipartite graph (every tree
// and every even cycle) when all M_i > 0.
struct ConditionInputs {
  Vector eta_now;   // eta_i(t)
  Vector eta_next;  // eta_i(t+1)
  double gamma = 0.0;
  Vector lipschitz;  // M_i; D_M holds their squares
  double L = 2.0;
  double mu = 2.0;
};

struct ConditionReport {
  bool holds_i = false;
  bool holds_ii = false;
  double margin_i = 0.0;
  double margin_ii = 0.0;

  bool holds() const { return holds_i && holds_ii; }
};

ConditionReport CheckMrConditions(const Topology& topology,
                                  const ConditionInputs& inputs);

// Constant-penalty specialization (L = mu = 2):
//   (iii) I + eta(D+A)D~^-1 > (2 / (eta s)) (D-A)^+ D_M
//   (iv)  eta(D+A) > 2 eta (D+A) D~^-1 eta D + (2/s) D_M
ConditionReport CheckRConditions(const Topology& topology, double eta,
                                 double gamma, const Vector& lipschitz);

// Moore-Penrose pseudo-inverse by SVD; singular values below
// rel_tol * sigma_max are treated as zero.
Matrix PseudoInverse(const Matrix& m, double rel_tol = 1e-12);

// Smallest eigenvalue of (m + m^T) / 2.
double SymmetricPartMinEigenvalue(const Matrix& m);

struct OptimalityResiduals {
  double stationarity = 0.0;  // |grad O^(f) + 2 Lambda|_F
  double consensus = 0.0;     // |(D - A) f|_F
};

OptimalityResiduals ComputeOptimalityResiduals(
    std::span<const Vector> primal, std::span<const Vector> dual,
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives);

struct SampleComplexityInputs {
  double f_ref_norm_sq = 1.0;
  double tau = 0.1;
  double delta = 0.1;
  std::vector<double> delta_k{0.0};  // Delta_i(k) or Delta_i^new(k), per k
  double w = 1.0;
  // Private case only.
  double a = 0.1;
  std::vector<double> alpha{1.0};  // alpha_i(k), per k (or one for all)
  int d = 1;
  double C = 1.0;
  int N = 1;
};

// B_min = w max_k |f_ref|^2 log(1/delta) / (tau - Delta(k))^2.
// Throws InfeasibleTarget if tau <= Delta(k) for some k.
double SampleComplexityNonPrivate(const SampleComplexityInputs& in);

// B_min = w max_k C N log(1/delta) /
//   ( N C (tau - Delta(k))^2 / (2 |f_ref|^2)
//     - (1 + a) N d^2 / (C alpha(k)^2) log(d/delta)^2 ).
// Throws InfeasibleTarget if tau <= Delta(k) and InfeasiblePrivacy if the
// denominator is not positive.
double SampleComplexityPrivate(const SampleComplexityInputs& in);

}  // namespace radmm

#endif  // RADMM_ANALYSIS_H_
