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

#ifndef RADMM_OBJECTIVE_H_
#define RADMM_OBJECTIVE_H_

#include <atomic>
#include <memory>
#include <optional>

#include <Eigen/Dense>

namespace radmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Local training data of one node: one sample per row, labels in {-1, +1}.
struct Dataset {
  Matrix features;
  Vector labels;

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Throws DimensionMismatch or InvalidArgument when a row has norm above
  // 1 + 1e-9, a label is not exactly +1 or -1, or the shapes disagree.
  void Validate() const;
};

// Constants of the regularized ERM objective
//   O(f, D_i) = (C / B_i) * sum_n loss(y_n f^T x_n) + (rho / N) * 0.5 |f|^2.
struct ObjectiveParams {
  double C = 1.0;
  double rho = 0.22;
  int n_nodes = 1;
  double c1 = 0.25;  // bound on loss'' (logistic: 1/4)

  // C <= min_i B_i, rho > 0, c1 > 0, n_nodes >= 1.
  void Validate(int min_batch_size) const;
};

struct LossTerms {
  double value;
  double derivative;
  double second_derivative;
};

// log(1 + exp(-z)) and its first two derivatives, safe for any finite z.
LossTerms LogisticLoss(double z);

double ObjectiveValue(const Vector& f, const Dataset& data,
                      const ObjectiveParams& params);
Vector ObjectiveGradient(const Vector& f, const Dataset& data,
                         const ObjectiveParams& params);
Matrix ObjectiveHessian(const Vector& f, const Dataset& data,
                        const ObjectiveParams& params);

// Closed-form bound C * c1 + rho / N on the gradient Lipschitz constant,
// valid because every feature row has norm at most one.
double GradientLipschitzBound(const ObjectiveParams& params);

// Local objective seen by a solver node. Implementations must be safe to
// call concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double Value(const Vector& f) const = 0;
  virtual Vector Gradient(const Vector& f) const = 0;
  // Returns nullopt when no Hessian is available; the inner solver then
  // falls back to gradient steps.
  virtual std::optional<Matrix> Hessian(const Vector& /*f*/) const {
    return std::nullopt;
  }
  virtual double GradientLipschitz() const = 0;
  virtual double StrongConvexity() const = 0;
};

class ErmObjective final : public Objective {
 public:
  ErmObjective(Dataset data, ObjectiveParams params);

  int dim() const override { return data_.dim(); }
  double Value(const Vector& f) const override;
  Vector Gradient(const Vector& f) const override;
  std::optional<Matrix> Hessian(const Vector& f) const override;
  double GradientLipschitz() const override;
  double StrongConvexity() const override;

  const Dataset& data() const { return data_; }
  const ObjectiveParams& params() const { return params_; }

 private:
  Dataset data_;
  ObjectiveParams params_;
};

// 0.5 * |f - center|^2. Its consensus optimum is the mean of the centers.
class QuadraticObjective final : public Objective {
 public:
  explicit QuadraticObjective(Vector center) : center_(std::move(center)) {}

  int dim() const override { return static_cast<int>(center_.size()); }
  double Value(const Vector& f) const override;
  Vector Gradient(const Vector& f) const override;
  std::optional<Matrix> Hessian(const Vector& f) const override;
  double GradientLipschitz() const override { return 1.0; }
  double StrongConvexity() const override { return 1.0; }

  const Vector& center() const { return center_; }

 private:
  Vector center_;
};

// Forwards to another objective and counts every data-dependent call.
class CountingObjective final : public Objective {
 public:
  explicit CountingObjective(std::shared_ptr<const Objective> inner)
      : inner_(std::move(inner)) {}

  int dim() const override { return inner_->dim(); }
  double Value(const Vector& f) const override;
  Vector Gradient(const Vector& f) const override;
  std::optional<Matrix> Hessian(const Vector& f) const override;
  double GradientLipschitz() const override {
    return inner_->GradientLipschitz();
  }
  double StrongConvexity() const override { return inner_->StrongConvexity(); }

  long value_calls() const { return value_calls_.load(); }
  long gradient_calls() const { return gradient_calls_.load(); }
  long hessian_calls() const { return hessian_calls_.load(); }
  long total_calls() const {
    return value_calls() + gradient_calls() + hessian_calls();
  }
  void Reset();

  const Objective& inner() const { return *inner_; }

 private:
  std::shared_ptr<const Objective> inner_;
  mutable std::atomic<long> value_calls_{0};
  mutable std::atomic<long> gradient_calls_{0};
  mutable std::atomic<long> hessian_calls_{0};
};

}  // namespace radmm

#endif  // RADMM_OBJECTIVE_H_
