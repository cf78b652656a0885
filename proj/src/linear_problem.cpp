// Copyright 2026 The LQT Authors
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

#include "lqt/linear_problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lqt {

LinearProblem::LinearProblem(const LinearizedModel& lin, const FrequencyTensor& freq,
                             std::optional<std::vector<std::size_t>> selection, const simd::KernelTable* kernels)
    : packing_(lin.k()), kernels_(kernels != nullptr ? kernels : &simd::active_kernels()) {
  const ExperimentDesign& design = lin.design;
  const std::size_t d = design.dim();
  if (freq.values.size() != design.n_entries() || freq.group_shots.size() != design.n_groups()) {
    throw ValidationError("frequency tensor does not match the linear model's design");
  }

  std::vector<std::size_t> entries = selection ? *selection : design.independent_entries();
  std::sort(entries.begin(), entries.end());
  if (std::adjacent_find(entries.begin(), entries.end()) != entries.end()) {
    throw ValidationError("configuration selection contains duplicates");
  }
  std::map<std::size_t, std::vector<std::size_t>> by_group;
  for (std::size_t e : entries) {
    if (e >= design.n_entries()) throw ValidationError("configuration index out of range");
    if (design.outcome_of(e) == d - 1) throw ValidationError("selection contains a dependent outcome");
    const std::size_t g = design.group_of(e);
    if (!freq.present(g)) continue;
    by_group[g].push_back(e);
  }

  std::size_t n_rows = 0;
  for (const auto& [g, es] : by_group) n_rows += es.size() + 1;
  const auto cols = static_cast<Eigen::Index>(packing_.size());
  a_.resize(static_cast<Eigen::Index>(n_rows), cols);
  pu_.resize(static_cast<Eigen::Index>(n_rows));
  f_.resize(static_cast<Eigen::Index>(n_rows));
  n_groups_ = by_group.size();
  if (!design.times().empty() && design.times().back() > 0.0) max_time_ = design.times().back();

  Eigen::Index row = 0;
  for (const auto& [g, es] : by_group) {
    RVec rest_a = RVec::Zero(cols);
    double rest_pu = 1.0;
    double rest_f = 1.0;
    for (std::size_t e : es) {
      const auto ei = static_cast<Eigen::Index>(e);
      a_.row(row) = lin.a.row(ei);
      pu_[row] = lin.p_u[ei];
      f_[row] = freq.values[e];
      rest_a -= lin.a.row(ei).transpose();
      rest_pu -= lin.p_u[ei];
      rest_f -= freq.values[e];
      config_rows_.push_back(static_cast<std::size_t>(row));
      row_group_.push_back(g);
      row_shots_.push_back(freq.group_shots[g]);
      ++row;
    }
    a_.row(row) = rest_a.transpose();
    pu_[row] = rest_pu;
    // Rounding can leave a tiny negative remainder.
    f_[row] = std::max(rest_f, 0.0);
    row_group_.push_back(g);
    row_shots_.push_back(freq.group_shots[g]);
    ++row;
  }
}

RVec LinearProblem::probabilities(const RVec& x) const {
  RVec p(static_cast<Eigen::Index>(n_rows()));
  kernels_->gemv(a_.data(), n_rows(), n_params(), n_params(), x.data(), p.data());
  p += pu_;
  return p;
}

double LinearProblem::cost(const RVec& x) const {
  const RVec p = probabilities(x);
  double c = 0.0;
  for (Eigen::Index r = 0; r < p.size(); ++r) {
    if (f_[r] == 0.0) continue;
    c -= f_[r] * std::log(std::max(p[r], kProbabilityClamp));
  }
  return c;
}

double LinearProblem::cost_and_gradient(const RVec& x, RVec& grad) const {
  const RVec p = probabilities(x);
  RVec w(p.size());
  double c = 0.0;
  for (Eigen::Index r = 0; r < p.size(); ++r) {
    if (f_[r] == 0.0) {
      w[r] = 0.0;
      continue;
    }
    const double pr = std::max(p[r], kProbabilityClamp);
    c -= f_[r] * std::log(pr);
    w[r] = -f_[r] / pr;
  }
  grad = RVec::Zero(static_cast<Eigen::Index>(n_params()));
  kernels_->gemv_t(a_.data(), n_rows(), n_params(), n_params(), w.data(), grad.data());
  return c;
}

CMat LinearProblem::gradient_matrix(const CMat& g) const {
  RVec grad;
  cost_and_gradient(packing_.pack(g), grad);
  return packing_.unpack_gradient(grad);
}

RVec LinearProblem::residual(const RVec& x) const {
  const RVec p = probabilities(x);
  RVec r(static_cast<Eigen::Index>(config_rows_.size()));
  for (std::size_t j = 0; j < config_rows_.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(config_rows_[j]);
    r[static_cast<Eigen::Index>(j)] = f_[row] - p[row];
  }
  return r;
}

RowMat LinearProblem::configuration_matrix() const {
  RowMat m(static_cast<Eigen::Index>(config_rows_.size()), static_cast<Eigen::Index>(n_params()));
  for (std::size_t j = 0; j < config_rows_.size(); ++j) {
    m.row(static_cast<Eigen::Index>(j)) = a_.row(static_cast<Eigen::Index>(config_rows_[j]));
  }
  return m;
}

RVec LinearProblem::configuration_target() const {
  RVec t(static_cast<Eigen::Index>(config_rows_.size()));
  for (std::size_t j = 0; j < config_rows_.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(config_rows_[j]);
    t[static_cast<Eigen::Index>(j)] = f_[row] - pu_[row];
  }
  return t;
}

}  // namespace lqt
