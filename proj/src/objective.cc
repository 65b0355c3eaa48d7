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

#include "radmm/objective.h"

#include <cmath>
#include <string>

#include "radmm/error.h"

namespace radmm {
namespace {

constexpr double kRowNormSlack = 1e-9;

void CheckDim(const Vector& f, const Dataset& data) {
  if (f.size() != data.dim()) {
    throw DimensionMismatch("classifier has dimension " +
                            std::to_string(f.size()) + ", features have " +
                            std::to_string(data.dim()));
  }
}

}  // namespace

void Dataset::Validate() const {
  if (labels.size() != features.rows()) {
    throw DimensionMismatch("label count does not match feature rows");
  }
  for (int n = 0; n < size(); ++n) {
    if (features.row(n).norm() > 1.0 + kRowNormSlack) {
      throw InvalidArgument("feature row " + std::to_string(n) +
                            " has norm above 1");
    }
    if (labels(n) != 1.0 && labels(n) != -1.0) {
      throw InvalidArgument("label " + std::to_string(n) + " is not +-1");
    }
  }
}

void ObjectiveParams::Validate(int min_batch_size) const {
  if (!(C > 0.0) || C > min_batch_size) {
    throw InvalidArgument("C must satisfy 0 < C <= min_i B_i");
  }
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (!(c1 > 0.0)) throw InvalidArgument("c1 must be positive");
  if (n_nodes < 1) throw InvalidArgument("n_nodes must be positive");
}

LossTerms LogisticLoss(double z) {
  // exp(-|z|) never overflows; pick the branch that keeps it that way.
  const double e = std::exp(-std::abs(z));
  LossTerms out;
  if (z >= 0.0) {
    out.value = std::log1p(e);
    out.derivative = -e / (1.0 + e);
  } else {
    out.value = -z + std::log1p(e);
    out.derivative = -1.0 / (1.0 + e);
  }
  out.second_derivative = e / ((1.0 + e) * (1.0 + e));
  return out;
}

double ObjectiveValue(const Vector& f, const Dataset& data,
                      const ObjectiveParams& params) {
  CheckDim(f, data);
  double loss = 0.0;
  if (data.size() > 0) {
    Vector margins = data.features * f;
    for (int n = 0; n < data.size(); ++n) {
      loss += LogisticLoss(data.labels(n) * margins(n)).value;
    }
    loss *= params.C / data.size();
  }
  return loss + params.rho / params.n_nodes * 0.5 * f.squaredNorm();
}

Vector ObjectiveGradient(const Vector& f, const Dataset& data,
                         const ObjectiveParams& params) {
  CheckDim(f, data);
  Vector grad = params.rho / params.n_nodes * f;
  if (data.size() > 0) {
    Vector margins = data.features * f;
    Vector weights(data.size());
    for (int n = 0; n < data.size(); ++n) {
      weights(n) =
          LogisticLoss(data.labels(n) * margins(n)).derivative * data.labels(n);
    }
    grad.noalias() += params.C / data.size() * (data.features.transpose() * weights);
  }
  return grad;
}

Matrix ObjectiveHessian(const Vector& f, const Dataset& data,
                        const ObjectiveParams& params) {
  CheckDim(f, data);
  const int d = data.dim();
  Matrix hess = params.rho / params.n_nodes * Matrix::Identity(d, d);
  if (data.size() > 0) {
    Vector margins = data.features * f;
    Vector curvature(data.size());
    for (int n = 0; n < data.size(); ++n) {
      curvature(n) = LogisticLoss(data.labels(n) * margins(n)).second_derivative;
    }
    Matrix weighted = curvature.cwiseSqrt().asDiagonal() * data.features;
    hess.noalias() += params.C / data.size() * (weighted.transpose() * weighted);
  }
  return hess;
}

double GradientLipschitzBound(const ObjectiveParams& params) {
  return params.C * params.c1 + params.rho / params.n_nodes;
}

ErmObjective::ErmObjective(Dataset data, ObjectiveParams params)
    : data_(std::move(data)), params_(params) {
  data_.Validate();
}

double ErmObjective::Value(const Vector& f) const {
  return ObjectiveValue(f, data_, params_);
}

Vector ErmObjective::Gradient(const Vector& f) const {
  return ObjectiveGradient(f, data_, params_);
}

std::optional<Matrix> ErmObjective::Hessian(const Vector& f) const {
  return ObjectiveHessian(f, data_, params_);
}

double ErmObjective::GradientLipschitz() const {
  return GradientLipschitzBound(params_);
}

double ErmObjective::StrongConvexity() const {
  return params_.rho / params_.n_nodes;
}

double QuadraticObjective::Value(const Vector& f) const {
  if (f.size() != center_.size()) throw DimensionMismatch("quadratic objective");
  return 0.5 * (f - center_).squaredNorm();
}

Vector QuadraticObjective::Gradient(const Vector& f) const {
  if (f.size() != center_.size()) throw DimensionMismatch("quadratic objective");
  return f - center_;
}

std::optional<Matrix> QuadraticObjective::Hessian(const Vector& f) const {
  if (f.size() != center_.size()) throw DimensionMismatch("quadratic objective");
  return Matrix::Identity(f.size(), f.size());
}

double CountingObjective::Value(const Vector& f) const {
  ++value_calls_;
  return inner_->Value(f);
}

Vector CountingObjective::Gradient(const Vector& f) const {
  ++gradient_calls_;
  return inner_->Gradient(f);
}

std::optional<Matrix> CountingObjective::Hessian(const Vector& f) const {
  ++hessian_calls_;
  return inner_->Hessian(f);
}

void CountingObjective::Reset() {
  value_calls_ = 0;
  gradient_calls_ = 0;
  hessian_calls_ = 0;
}

}  // namespace radmm
