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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lqt/common.hpp"

namespace lqt {

/// Informationally complete set of d^2 product input states.
struct StateSet {
  int n_qubits = 0;
  std::vector<CMat> states;
};

/// Tensor products of {|0><0|, |1><1|, |+><+|, |+i><+i|}, base-4 ordered with qubit 1 most significant.
StateSet standard_initial_states(int n_qubits, int max_qubits = kDefaultMaxQubits);

/// Local Pauli measurement: basis word over {x,y,z}, outcome word over {+,-}.
struct MeasurementSetting {
  std::string basis;
  std::string outcome;
};

/// Product of single-qubit projectors (1 + m sigma_b)/2. No 1/3^N POVM weight: probabilities are per basis.
CMat projector(const MeasurementSetting& setting);

/// One (state, time, basis, outcome) entry of a tomography experiment.
struct Configuration {
  std::size_t state_id = 0;
  std::size_t time_index = 0;
  std::string basis;
  std::string outcome;
  bool independent = true;
};

/// Sentinel for exact-probability ("infinite-shot") data.
inline constexpr double kInfiniteShots = std::numeric_limits<double>::infinity();

/// Full enumeration of configurations for local-Pauli LQT.
///
/// Outcomes are stored flat, ordered by (time, state, basis, outcome) with basis
/// words in base 3 (x < y < z) and outcome words in base 2 (+ < -), qubit 1 most
/// significant. A "group" is one (state, time, basis) triple holding d outcomes;
/// the lexicographically last outcome of every group is flagged dependent.
class ExperimentDesign {
 public:
  ExperimentDesign() = default;
  ExperimentDesign(int n_qubits, std::vector<double> times, std::optional<std::uint64_t> shots_per_setting,
                   int max_qubits = kDefaultMaxQubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_qubits_; }
  const std::vector<double>& times() const noexcept { return times_; }
  /// Shots per (state, time, basis); empty in infinite-shot mode.
  const std::optional<std::uint64_t>& shots_per_setting() const noexcept { return shots_; }

  std::size_t n_states() const noexcept { return dim() * dim(); }
  std::size_t n_times() const noexcept { return times_.size(); }
  std::size_t n_bases() const noexcept { return n_bases_; }
  std::size_t n_outcomes_per_basis() const noexcept { return dim(); }
  std::size_t n_groups() const noexcept { return n_times() * n_states() * n_bases_; }
  std::size_t n_entries() const noexcept { return n_groups() * dim(); }
  /// 3^N d^2 (d-1) per time step.
  std::size_t n_independent_per_time() const noexcept { return n_states() * n_bases_ * (dim() - 1); }

  std::size_t group_index(std::size_t state, std::size_t time_index, std::size_t basis) const;
  std::size_t entry_index(std::size_t state, std::size_t time_index, std::size_t basis, std::size_t outcome) const;
  std::size_t group_of(std::size_t entry) const noexcept { return entry / dim(); }
  std::size_t outcome_of(std::size_t entry) const noexcept { return entry % dim(); }

  std::string basis_word(std::size_t basis) const;
  std::string outcome_word(std::size_t outcome) const;
  std::size_t basis_index(const std::string& word) const;
  std::size_t outcome_index(const std::string& word) const;

  Configuration configuration(std::size_t entry) const;
  std::vector<Configuration> configurations() const;
  /// Flat indices of every independent configuration, in entry order.
  std::vector<std::size_t> independent_entries() const;

  /// Projector of every (basis, outcome) pair, indexed basis * d + outcome.
  const std::vector<CMat>& projectors() const noexcept { return projectors_; }
  const StateSet& initial_states() const noexcept { return states_; }

 private:
  int n_qubits_ = 0;
  std::vector<double> times_;
  std::optional<std::uint64_t> shots_;
  std::size_t n_bases_ = 0;
  std::vector<CMat> projectors_;
  StateSet states_;
};

/// Builds the design; validates times (non-negative, strictly increasing) and shot budget.
ExperimentDesign enumerate_configurations(int n_qubits, std::vector<double> times,
                                          std::optional<std::uint64_t> shots_per_setting,
                                          int max_qubits = kDefaultMaxQubits);

}  // namespace lqt
