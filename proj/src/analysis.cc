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

#include "radmm/analysis.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "radmm/error.h"

namespace radmm {
namespace {

void RequireFinite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NonfiniteInput(std::string(what) + " contains non-finite values");
  }
}

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NonfiniteInput(std::string(what) + " is not finite");
  }
}

Vector DegreeVector(const Topology& topology) {
  Vector v(topology.num_nodes());
  for (int i = 0; i < topology.num_nodes(); ++i) v(i) = topology.degree(i);
  return v;
}

}  // namespace

Matrix PseudoInverse(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Vector inv = Vector::Zero(sv.size());
  for (int k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) inv(k) = 1.0 / sv(k);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double SymmetricPartMinEigenvalue(const Matrix& m) {
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ConditionReport CheckMrConditions(const Topology& topology,
                                  const ConditionInputs& in) {
  const int n = topology.num_nodes();
  if (in.eta_now.size() != n || in.eta_next.size() != n ||
      in.lipschitz.size() != n) {
    throw DimensionMismatch("condition inputs need one entry per node");
  }
  RequireFinite(in.eta_now, "eta(t)");
  RequireFinite(in.eta_next, "eta(t+1)");
  RequireFinite(in.lipschitz, "lipschitz");
  RequireFinite(in.gamma, "gamma");
  RequireFinite(in.L, "L");
  RequireFinite(in.mu, "mu");
  if (!(in.L > 0.0) || !(in.mu > 1.0)) {
    throw InvalidArgument("conditions need L > 0 and mu > 1");
  }
  if ((in.eta_now.array() <= 0.0).any() || (in.eta_next.array() <= 0.0).any()) {
    throw InvalidArgument("penalties must be positive");
  }

  const auto [lap, signless] = LaplacianMatrices(topology);
  const Vector deg = DegreeVector(topology);
  const Vector dtilde =
      2.0 * in.eta_now.cwiseProduct(deg) + Vector::Constant(n, in.gamma);
  const double smin = dtilde.minCoeff();
  if (!(smin > 0.0)) throw InvalidArgument("D~(t) must be positive");

  const Matrix dtilde_inv = dtilde.cwiseInverse().asDiagonal();
  const Matrix w_now = in.eta_now.asDiagonal();
  const Matrix w_next = in.eta_next.asDiagonal();
  const Matrix dm = in.lipschitz.cwiseAbs2().asDiagonal();
  const Matrix eye = Matrix::Identity(n, n);

  const Matrix lhs_i = eye + w_next * signless * dtilde_inv;
  const Matrix rhs_i =
      in.L * in.mu / (2.0 * smin) * PseudoInverse(w_next * lap) * dm;

  const Matrix lhs_ii = w_next * signless;
  const Matrix rhs_ii =
      w_next * signless * dtilde_inv *
          (w_now * lap + 2.0 / in.L * w_next * signless) +
      in.L * in.mu / (2.0 * smin * (in.mu - 1.0)) * dm;

  ConditionReport r;
  r.margin_i = SymmetricPartMinEigenvalue(lhs_i - rhs_i);
  r.margin_ii = SymmetricPartMinEigenvalue(lhs_ii - rhs_ii);
  r.holds_i = r.margin_i > 0.0;
  r.holds_ii = r.margin_ii > 0.0;
  return r;
}

ConditionReport CheckRConditions(const Topology& topology, double eta,
                                 double gamma, const Vector& lipschitz) {
  const int n = topology.num_nodes();
  if (lipschitz.size() != n) {
    throw DimensionMismatch("need one Lipschitz constant per node");
  }
  RequireFinite(eta, "eta");
  RequireFinite(gamma, "gamma");
  RequireFinite(lipschitz, "lipschitz");
  if (!(eta > 0.0) || !(gamma >= 0.0)) {
    throw InvalidArgument("need eta > 0 and gamma >= 0");
  }

  const auto [lap, signless] = LaplacianMatrices(topology);
  const Vector deg = DegreeVector(topology);
  const Vector dtilde = 2.0 * eta * deg + Vector::Constant(n, gamma);
  const double smin = dtilde.minCoeff();
  if (!(smin > 0.0)) throw InvalidArgument("D~ must be positive");
  const Matrix dtilde_inv = dtilde.cwiseInverse().asDiagonal();
  const Matrix dm = lipschitz.cwiseAbs2().asDiagonal();
  const Matrix degree = deg.asDiagonal();

  const Matrix lhs_iii = Matrix::Identity(n, n) + eta * signless * dtilde_inv;
  const Matrix rhs_iii = 2.0 / (eta * smin) * PseudoInverse(lap) * dm;
  const Matrix lhs_iv = eta * signless;
  const Matrix rhs_iv =
      2.0 * eta * signless * dtilde_inv * eta * degree + 2.0 / smin * dm;

  ConditionReport r;
  r.margin_i = SymmetricPartMinEigenvalue(lhs_iii - rhs_iii);
  r.margin_ii = SymmetricPartMinEigenvalue(lhs_iv - rhs_iv);
  r.holds_i = r.margin_i > 0.0;
  r.holds_ii = r.margin_ii > 0.0;
  return r;
}

OptimalityResiduals ComputeOptimalityResiduals(
    std::span<const Vector> primal, std::span<const Vector> dual,
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives) {
  const int n = topology.num_nodes();
  if (static_cast<int>(primal.size()) != n ||
      static_cast<int>(dual.size()) != n ||
      static_cast<int>(objectives.size()) != n) {
    throw DimensionMismatch("residuals need one primal, dual and objective per node");
  }
  const int d = static_cast<int>(primal[0].size());
  Matrix f(n, d);
  Matrix stationarity(n, d);
  for (int i = 0; i < n; ++i) {
    f.row(i) = primal[i].transpose();
    stationarity.row(i) =
        (objectives[i]->Gradient(primal[i]) + 2.0 * dual[i]).transpose();
  }
  const Matrix lap = LaplacianMatrices(topology).laplacian;
  return {stationarity.norm(), (lap * f).norm()};
}

double SampleComplexityNonPrivate(const SampleComplexityInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  if (in.delta_k.empty()) throw InvalidArgument("need at least one Delta(k)");
  double worst = 0.0;
  for (double gap_k : in.delta_k) {
    const double gap = in.tau - gap_k;
    if (!(gap > 0.0)) {
      throw InfeasibleTarget("tau must exceed every Delta(k)");
    }
    worst = std::max(worst,
                     in.f_ref_norm_sq * std::log(1.0 / in.delta) / (gap * gap));
  }
  return in.w * worst;
}

double SampleComplexityPrivate(const SampleComplexityInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  if (in.delta_k.empty()) throw InvalidArgument("need at least one Delta(k)");
  if (in.alpha.size() != 1 && in.alpha.size() != in.delta_k.size()) {
    throw DimensionMismatch("alpha needs one entry or one per k");
  }
  if (!(in.C > 0.0) || in.N < 1 || in.d < 1 || !(in.a > 0.0) ||
      !(in.f_ref_norm_sq > 0.0)) {
    throw InvalidArgument("need C > 0, N >= 1, d >= 1, a > 0, |f_ref| > 0");
  }
  const double numerator = in.C * in.N * std::log(1.0 / in.delta);
  const double log_term = std::log(in.d / in.delta);
  double worst = 0.0;
  for (std::size_t k = 0; k < in.delta_k.size(); ++k) {
    const double gap = in.tau - in.delta_k[k];
    if (!(gap > 0.0)) {
      throw InfeasibleTarget("tau must exceed every Delta_new(k)");
    }
    const double alpha = in.alpha.size() == 1 ? in.alpha[0] : in.alpha[k];
    const double accuracy = in.N * in.C * gap * gap / (2.0 * in.f_ref_norm_sq);
    const double privacy = (1.0 + in.a) * in.N * in.d * in.d /
                           (in.C * alpha * alpha) * log_term * log_term;
    const double denom = accuracy - privacy;
    if (!(denom > 0.0)) {
      throw InfeasiblePrivacy("noise too large for the target tau at k=" +
                              std::to_string(k + 1));
    }
    worst = std::max(worst, numerator / denom);
  }
  return in.w * worst;
}

}  // namespace radmm
