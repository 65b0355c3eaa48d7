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

#ifndef RADMM_INNER_SOLVER_H_
#define RADMM_INNER_SOLVER_H_

#include "radmm/objective.h"

namespace radmm {

struct InnerOptions {
  double tolerance = 1e-8;
  int max_iterations = 500;
};

struct InnerResult {
  Vector solution;
  double gradient_norm = 0.0;
  int iterations = 0;
  // False when max_iterations ran out; `solution` is then the iterate with
  // the smallest subproblem gradient seen.
  bool converged = false;
};

// Minimizes
//   O(f) + linear_term^T f + proximal_weight * |f|^2 - 2 * center_sum^T f
// until the subproblem gradient norm is at most options.tolerance. Uses
// damped Newton steps when the objective exposes a Hessian and 1/L
// gradient steps otherwise. Throws NonfiniteValue if an iterate blows up and
// InvalidArgument when the subproblem is not strongly convex.
InnerResult InnerSolve(const Objective& objective, const Vector& linear_term,
                       const Vector& center_sum, double proximal_weight,
                       const Vector& warm_start, const InnerOptions& options);

}  // namespace radmm

#endif  // RADMM_INNER_SOLVER_H_
