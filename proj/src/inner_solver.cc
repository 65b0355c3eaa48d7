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

#include "radmm/inner_solver.h"

#include <cmath>

#include "radmm/error.h"

namespace radmm {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

struct Subproblem {
  const Objective& objective;
  const Vector& linear_term;
  const Vector& center_sum;
  double weight;

  double Value(const Vector& f) const {
    return objective.Value(f) + linear_term.dot(f) + weight * f.squaredNorm() -
           2.0 * center_sum.dot(f);
  }
  Vector Gradient(const Vector& f) const {
    return objective.Gradient(f) + linear_term + 2.0 * weight * f -
           2.0 * center_sum;
  }
};

void RequireFinite(const Vector& v) {
  if (!v.allFinite()) throw NonfiniteValue("inner solve produced a non-finite iterate");
}

}  // namespace

InnerResult InnerSolve(const Objective& objective, const Vector& linear_term,
                       const Vector& center_sum, double proximal_weight,
                       const Vector& warm_start, const InnerOptions& options) {
  const int d = objective.dim();
  if (linear_term.size() != d || center_sum.size() != d ||
      warm_start.size() != d) {
    throw DimensionMismatch("inner solve operands disagree in dimension");
  }
  if (!(options.tolerance > 0.0)) {
    throw InvalidArgument("inner tolerance must be positive");
  }
  if (!(proximal_weight > 0.0) && !(objective.StrongConvexity() > 0.0)) {
    throw InvalidArgument("inner subproblem is not strongly convex");
  }
  const Subproblem sub{objective, linear_term, center_sum, proximal_weight};
  const double step_lipschitz =
      objective.GradientLipschitz() + 2.0 * proximal_weight;

  InnerResult best;
  Vector f = warm_start;
  Vector g = sub.Gradient(f);
  RequireFinite(g);
  best.solution = f;
  best.gradient_norm = g.norm();

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const double gnorm = g.norm();
    if (gnorm < best.gradient_norm) {
      best.solution = f;
      best.gradient_norm = gnorm;
    }
    if (gnorm <= options.tolerance) break;

    Vector next;
    if (auto hess = objective.Hessian(f)) {
      hess->diagonal().array() += 2.0 * proximal_weight;
      Eigen::LLT<Matrix> llt(*hess);
      Vector step = (llt.info() == Eigen::Success)
                        ? Vector(-llt.solve(g))
                        : Vector(-g / step_lipschitz);
      const double value0 = sub.Value(f);
      const double slope = g.dot(step);
      // Once the predicted decrease is below the resolution of the value,
      // comparisons of values are noise; judge steps by the gradient norm.
      const bool by_gradient =
          -slope <= 1e-12 * (1.0 + std::abs(value0));
      double t = 1.0;
      bool accepted = false;
      Vector g_next;
      for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
        next = f + t * step;
        if (by_gradient) {
          g_next = sub.Gradient(next);
          if (g_next.norm() < gnorm) {
            accepted = true;
            break;
          }
        } else if (sub.Value(next) <= value0 + kArmijo * t * slope) {
          accepted = true;
          g_next = sub.Gradient(next);
          break;
        }
      }
      if (!accepted) {
        best.iterations = iter + 1;
        best.converged = best.gradient_norm <= options.tolerance;
        return best;
      }
      f = std::move(next);
      g = std::move(g_next);
      RequireFinite(f);
      RequireFinite(g);
      continue;
    } else {
      next = f - g / step_lipschitz;
    }
    f = std::move(next);
    RequireFinite(f);
    g = sub.Gradient(f);
    RequireFinite(g);
  }
  const double gnorm = g.norm();
  if (gnorm <= best.gradient_norm) {
    best.solution = f;
    best.gradient_norm = gnorm;
  }
  best.iterations = iter;
  best.converged = best.gradient_norm <= options.tolerance;
  return best;
}

}  // namespace radmm
