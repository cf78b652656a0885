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

#include "lqt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace lqt {
namespace {

constexpr double kNegativeTol = 1e-12;
constexpr double kSumTol = 1e-9;
constexpr const char* kCsvHeader = "state_id,time_index,basis,outcome,count";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_uint(const std::string& field, const char* what, std::size_t line) {
  std::uint64_t v = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(std::string("invalid ") + what + " '" + field + "'", line);
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::uint64_t CountsTable::total_shots() const {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  return total;
}

void CountsTable::validate() const {
  if (counts.size() != design.n_entries() || present.size() != design.n_groups()) {
    throw ValidationError("counts table does not match its design");
  }
  const std::uint64_t nsc = shots_per_setting();
  if (nsc == 0) throw ValidationError("counts table needs a positive N_sc");
  const std::size_t d = design.dim();
  for (std::size_t g = 0; g < design.n_groups(); ++g) {
    std::uint64_t sum = 0;
    for (std::size_t m = 0; m < d; ++m) sum += counts[g * d + m];
    if (present[g] ? sum != nsc : sum != 0) {
      const Configuration c = design.configuration(g * d);
      throw ValidationError("counts for (state " + std::to_string(c.state_id) + ", time " +
                            std::to_string(c.time_index) + ", basis " + c.basis + ") sum to " + std::to_string(sum) +
                            ", expected " + std::to_string(present[g] ? nsc : 0));
    }
  }
}

bool FrequencyTensor::infinite_shots() const {
  for (double s : group_shots) {
    if (std::isinf(s)) return true;
  }
  return false;
}

double FrequencyTensor::total_shots() const {
  double total = 0.0;
  for (double s : group_shots) total += s;
  return total;
}

CountsTable sample_counts(const ProbabilityTensor& probabilities, const ExperimentDesign& design,
                          std::uint64_t shots_per_setting, std::uint64_t seed) {
  if (probabilities.size() != design.n_entries()) throw ValidationError("probability tensor does not match design");
  if (shots_per_setting == 0) throw ValidationError("shots_per_setting must be positive");
  CountsTable table{ExperimentDesign(design.n_qubits(), design.times(), shots_per_setting),
                    std::vector<std::uint64_t>(design.n_entries(), 0), std::vector<bool>(design.n_groups(), true)};
  const std::size_t d = design.dim();
  for (std::size_t g = 0; g < design.n_groups(); ++g) {
    double mass = 0.0;
    for (std::size_t m = 0; m < d; ++m) {
      const double p = probabilities[g * d + m];
      if (p < -kNegativeTol || !std::isfinite(p)) throw ValidationError("negative or non-finite probability");
      mass += std::max(p, 0.0);
    }
    if (std::abs(mass - 1.0) > kSumTol) throw ValidationError("per-basis probabilities do not sum to 1");
    std::mt19937_64 rng(derive_seed(seed, g));
    std::uint64_t remaining = shots_per_setting;
    double remaining_mass = mass;
    for (std::size_t m = 0; m + 1 < d && remaining > 0; ++m) {
      const double p = std::max(probabilities[g * d + m], 0.0);
      const double q = remaining_mass > 0.0 ? std::clamp(p / remaining_mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      const std::uint64_t c = binom(rng);
      table.counts[g * d + m] = c;
      remaining -= c;
      remaining_mass -= p;
    }
    table.counts[g * d + d - 1] += remaining;
  }
  return table;
}

FrequencyTensor frequencies(const CountsTable& counts) {
  counts.validate();
  const double nsc = static_cast<double>(counts.shots_per_setting());
  const std::size_t d = counts.design.dim();
  FrequencyTensor f{std::vector<double>(counts.counts.size(), 0.0),
                    std::vector<double>(counts.design.n_groups(), 0.0)};
  for (std::size_t g = 0; g < counts.design.n_groups(); ++g) {
    if (!counts.present[g]) continue;
    f.group_shots[g] = nsc;
    for (std::size_t m = 0; m < d; ++m) f.values[g * d + m] = static_cast<double>(counts.counts[g * d + m]) / nsc;
  }
  return f;
}

FrequencyTensor exact_frequencies(const ProbabilityTensor& probabilities, const ExperimentDesign& design) {
  if (probabilities.size() != design.n_entries()) throw ValidationError("probability tensor does not match design");
  return FrequencyTensor{probabilities, std::vector<double>(design.n_groups(), kInfiniteShots)};
}

std::filesystem::path counts_sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".meta.json");
  return p;
}

std::string format_counts_csv(const CountsTable& counts) {
  counts.validate();
  const ExperimentDesign& design = counts.design;
  std::string out = std::string(kCsvHeader) + "\n";
  for (std::size_t k = 0; k < design.n_entries(); ++k) {
    if (!counts.present[design.group_of(k)]) continue;
    const Configuration c = design.configuration(k);
    out += std::to_string(c.state_id) + "," + std::to_string(c.time_index) + "," + c.basis + "," + c.outcome + "," +
           std::to_string(counts.counts[k]) + "\n";
  }
  return out;
}

CountsTable parse_counts_csv(const std::string& text, const ExperimentDesign& design) {
  if (!design.shots_per_setting()) throw ValidationError("counts design needs N_sc");
  CountsTable table{design, std::vector<std::uint64_t>(design.n_entries(), 0),
                    std::vector<bool>(design.n_groups(), false)};
  std::vector<bool> seen(design.n_entries(), false);
  std::vector<std::size_t> first_line(design.n_groups(), 0);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_done = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw ParseError("CR line endings are not accepted", line_no);
    if (!header_done) {
      if (line != kCsvHeader) throw ParseError("expected header '" + std::string(kCsvHeader) + "'", line_no);
      header_done = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    const std::uint64_t s = parse_uint(fields[0], "state_id", line_no);
    const std::uint64_t i = parse_uint(fields[1], "time_index", line_no);
    if (s >= design.n_states()) throw ParseError("state_id out of range", line_no);
    if (i >= design.n_times()) throw ParseError("time_index out of range", line_no);
    std::size_t b = 0;
    std::size_t m = 0;
    try {
      b = design.basis_index(fields[2]);
      m = design.outcome_index(fields[3]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    const std::uint64_t count = parse_uint(fields[4], "count", line_no);
    const std::size_t k = design.entry_index(s, i, b, m);
    if (seen[k]) throw ParseError("duplicate row for this configuration", line_no);
    seen[k] = true;
    const std::size_t g = design.group_of(k);
    if (!table.present[g]) first_line[g] = line_no;
    table.present[g] = true;
    table.counts[k] = count;
  }
  if (!header_done) throw ParseError("empty counts file", 1);
  const std::size_t d = design.dim();
  const std::uint64_t nsc = *design.shots_per_setting();
  for (std::size_t g = 0; g < design.n_groups(); ++g) {
    if (!table.present[g]) continue;
    std::uint64_t sum = 0;
    for (std::size_t m = 0; m < d; ++m) sum += table.counts[g * d + m];
    if (sum != nsc) {
      const Configuration c = design.configuration(g * d);
      throw ParseError("counts for (state " + std::to_string(c.state_id) + ", time " + std::to_string(c.time_index) +
                           ", basis " + c.basis + ") sum to " + std::to_string(sum) + ", expected N_sc=" +
                           std::to_string(nsc),
                       first_line[g]);
    }
  }
  return table;
}

void write_counts(const CountsTable& counts, const std::filesystem::path& csv, const std::string& extra_meta) {
  const std::string body = format_counts_csv(counts);
  nlohmann::ordered_json meta;
  meta["n_qubits"] = counts.design.n_qubits();
  meta["times"] = counts.design.times();
  meta["N_sc"] = counts.shots_per_setting();
  if (!extra_meta.empty()) {
    const auto extra = nlohmann::ordered_json::parse(extra_meta);
    for (auto it = extra.begin(); it != extra.end(); ++it) {
      if (!meta.contains(it.key())) meta[it.key()] = it.value();
    }
  }
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw Error("cannot write " + csv.string());
    out << body;
  }
  std::ofstream side(counts_sidecar_path(csv), std::ios::binary);
  if (!side) throw Error("cannot write " + counts_sidecar_path(csv).string());
  side << meta.dump(2) << "\n";
}

CountsTable read_counts(const std::filesystem::path& csv) {
  const std::filesystem::path side = counts_sidecar_path(csv);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(side));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(side.string() + ": " + e.what(), 0);
  }
  int n_qubits = 0;
  std::vector<double> times;
  std::uint64_t nsc = 0;
  try {
    n_qubits = meta.at("n_qubits").get<int>();
    times = meta.at("times").get<std::vector<double>>();
    nsc = meta.at("N_sc").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(side.string() + ": missing or invalid field (" + e.what() + ")", 0);
  }
  const ExperimentDesign design(n_qubits, times, nsc);
  return parse_counts_csv(read_file(csv), design);
}

}  // namespace lqt
