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
#include <filesystem>
#include <string>
#include <vector>

#include "lqt/lindblad.hpp"
#include "lqt/quantum_objects.hpp"

namespace lqt {

/// Observed outcome counts, dense over the design's entries.
///
/// Groups (state, time, basis) that were not measured are marked absent; every
/// present group sums to the design's shots_per_setting.
struct CountsTable {
  ExperimentDesign design;
  std::vector<std::uint64_t> counts;  // per entry
  std::vector<bool> present;          // per group

  std::uint64_t shots_per_setting() const { return design.shots_per_setting().value_or(0); }
  std::uint64_t total_shots() const;
  /// Throws ValidationError if the per-group totals or sizes are inconsistent.
  void validate() const;
};

/// Relative frequencies f = N_{s,i,b,m} / N_{s,i,b}.
///
/// group_shots holds N_{s,i,b} per group: kInfiniteShots for exact
/// probabilities, 0 for groups without data.
struct FrequencyTensor {
  std::vector<double> values;
  std::vector<double> group_shots;

  bool present(std::size_t group) const { return group_shots[group] > 0.0; }
  bool infinite_shots() const;
  /// Sum of group shots over present groups (infinite in infinite-shot mode).
  double total_shots() const;
};

/// One multinomial draw of `shots_per_setting` per group by sequential binomial
/// conditioning; group g draws from the stream derive_seed(seed, g).
CountsTable sample_counts(const ProbabilityTensor& probabilities, const ExperimentDesign& design,
                          std::uint64_t shots_per_setting, std::uint64_t seed);

FrequencyTensor frequencies(const CountsTable& counts);

/// Infinite-shot mode: the exact probabilities are used as frequencies.
FrequencyTensor exact_frequencies(const ProbabilityTensor& probabilities, const ExperimentDesign& design);

/// `<dir>/<stem>.meta.json` next to a counts CSV.
std::filesystem::path counts_sidecar_path(const std::filesystem::path& csv);

/// CSV `state_id,time_index,basis,outcome,count` (LF endings) plus the JSON sidecar
/// {n_qubits, times, N_sc}. `extra_meta` (a JSON object text, may be empty) is merged into the sidecar.
void write_counts(const CountsTable& counts, const std::filesystem::path& csv, const std::string& extra_meta = "");
CountsTable read_counts(const std::filesystem::path& csv);

/// Parses CSV text against a known design; exposed for tests.
CountsTable parse_counts_csv(const std::string& text, const ExperimentDesign& design);
std::string format_counts_csv(const CountsTable& counts);

}  // namespace lqt
