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

#pragma once

#include <optional>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/experiment.hpp"
#include "lqt/linearizer.hpp"
#include "lqt/simd/kernels.hpp"

namespace lqt {

/// Probability floor applied inside logarithms.
inline constexpr double kProbabilityClamp = 1e-12;

/// Linearized likelihood restricted to a set of independent configurations.
///
/// For every measured (state, time, basis) group touched by the selection, the
/// selected outcomes enter as their own rows and the remaining probability mass
/// of the group is lumped into one extra "rest" row (f = 1 - sum f, p = 1 - sum p),
/// which keeps the cost a proper multinomial likelihood. With the full selection
/// the rest row is the group's dependent outcome.
class LinearProblem {
 public:
  /// `selection` lists flat entry indices of independent configurations; empty means all.
  LinearProblem(const LinearizedModel& lin, const FrequencyTensor& freq,
                std::optional<std::vector<std::size_t>> selection = std::nullopt,
                const simd::KernelTable* kernels = nullptr);

  std::size_t k() const noexcept { return packing_.k(); }
  std::size_t n_params() const noexcept { return packing_.size(); }
  std::size_t n_rows() const noexcept { return static_cast<std::size_t>(f_.size()); }
  /// Number of selected configurations (non-rest rows).
  std::size_t n_configurations() const noexcept { return config_rows_.size(); }
  /// Number of groups contributing rows.
  std::size_t n_groups() const noexcept { return n_groups_; }
  /// Longest evolution time of the design.
  double max_time() const noexcept { return max_time_; }
  const HermitianPacking& packing() const noexcept { return packing_; }
  const simd::KernelTable& kernels() const noexcept { return *kernels_; }

  const RowMat& rows() const noexcept { return a_; }
  const RVec& baseline() const noexcept { return pu_; }
  const RVec& frequencies() const noexcept { return f_; }
  const std::vector<std::size_t>& configuration_rows() const noexcept { return config_rows_; }
  /// Design group of every row and its shot count N_g.
  const std::vector<std::size_t>& row_groups() const noexcept { return row_group_; }
  const std::vector<double>& row_shots() const noexcept { return row_shots_; }

  /// Linear probabilities of every row.
  RVec probabilities(const RVec& x) const;
  /// -sum f log p (clamped, f = 0 terms skipped).
  double cost(const RVec& x) const;
  /// Cost and packed gradient (see HermitianPacking::pack_gradient).
  double cost_and_gradient(const RVec& x, RVec& grad) const;
  double cost(const CMat& g) const { return cost(packing_.pack(g)); }
  /// Hermitian R with dC = Tr{R dG}.
  CMat gradient_matrix(const CMat& g) const;

  /// Residual f - p over the selected configuration rows.
  RVec residual(const RVec& x) const;
  /// Rows and targets of the configuration-only least-squares system A_S x = f_S - p_u,S.
  RowMat configuration_matrix() const;
  RVec configuration_target() const;

 private:
  HermitianPacking packing_;
  const simd::KernelTable* kernels_;
  RowMat a_;
  RVec pu_;
  RVec f_;
  std::vector<std::size_t> config_rows_;
  std::vector<std::size_t> row_group_;
  std::vector<double> row_shots_;
  std::size_t n_groups_ = 0;
  double max_time_ = 1.0;
};

}  // namespace lqt
