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

#include <gtest/gtest.h>

#include <filesystem>

#include "lqt/experiment.hpp"

using namespace lqt;

namespace {

ProbabilityTensor uniform(const ExperimentDesign& d) { return ProbabilityTensor(d.n_entries(), 1.0 / static_cast<double>(d.dim())); }

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lqt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Sampling, DeterministicOutcome) {
  const ExperimentDesign d(1, {1.0}, 500);
  ProbabilityTensor p(d.n_entries(), 0.0);
  for (std::size_t g = 0; g < d.n_groups(); ++g) p[g * 2] = 1.0;
  const CountsTable c = sample_counts(p, d, 500, 1);
  for (std::size_t g = 0; g < d.n_groups(); ++g) {
    EXPECT_EQ(c.counts[g * 2], 500U);
    EXPECT_EQ(c.counts[g * 2 + 1], 0U);
  }
}

TEST(Sampling, BinomialSpreadAndTotals) {
  const ExperimentDesign d(1, {1.0}, 10000);
  const CountsTable c = sample_counts(uniform(d), d, 10000, 42);
  for (std::size_t g = 0; g < d.n_groups(); ++g) EXPECT_NEAR(static_cast<double>(c.counts[2 * g]), 5000.0, 5 * 50.0);
  EXPECT_EQ(c.total_shots(), 120000U);
  EXPECT_NO_THROW(c.validate());
  // Same seed, same draw.
  EXPECT_EQ(sample_counts(uniform(d), d, 10000, 42).counts, c.counts);
  EXPECT_NE(sample_counts(uniform(d), d, 10000, 43).counts, c.counts);
}

TEST(Sampling, RejectsBadProbabilities) {
  const ExperimentDesign d(1, {1.0}, 10);
  ProbabilityTensor p = uniform(d);
  p[0] = 0.7;
  EXPECT_THROW(sample_counts(p, d, 10, 1), ValidationError);
}

TEST(Frequencies, RatiosAndExactMode) {
  const ExperimentDesign d(1, {1.0}, 100);
  CountsTable c{d, std::vector<std::uint64_t>(d.n_entries(), 0), std::vector<bool>(d.n_groups(), true)};
  for (std::size_t g = 0; g < d.n_groups(); ++g) {
    c.counts[2 * g] = 60;
    c.counts[2 * g + 1] = 40;
  }
  c.counts[0] = 100;
  c.counts[1] = 0;
  const FrequencyTensor f = frequencies(c);
  EXPECT_DOUBLE_EQ(f.values[0], 1.0);
  EXPECT_DOUBLE_EQ(f.values[1], 0.0);
  EXPECT_DOUBLE_EQ(f.values[2], 0.6);
  EXPECT_DOUBLE_EQ(f.values[3], 0.4);
  EXPECT_FALSE(f.infinite_shots());

  const ExperimentDesign inf(1, {1.0}, std::nullopt);
  ProbabilityTensor p = uniform(inf);
  p[0] = 0.3;
  p[1] = 0.7;
  const FrequencyTensor e = exact_frequencies(p, inf);
  EXPECT_TRUE(e.infinite_shots());
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_EQ(e.values[k], p[k]);
}

TEST(CountsCsv, RoundTripAndCounts) {
  const ExperimentDesign d(2, {1.0}, 1000);
  const CountsTable c = sample_counts(uniform(d), d, 1000, 9);
  const std::string text = format_counts_csv(c);
  std::size_t rows = 0;
  for (char ch : text) rows += ch == '\n';
  EXPECT_EQ(rows - 1, 576U);
  const CountsTable back = parse_counts_csv(text, d);
  EXPECT_EQ(back.counts, c.counts);
  EXPECT_EQ(back.present, c.present);

  const auto dir = temp_dir("counts");
  write_counts(c, dir / "data.csv", R"({"seed": 9})");
  EXPECT_TRUE(std::filesystem::exists(dir / "data.meta.json"));
  const CountsTable file = read_counts(dir / "data.csv");
  EXPECT_EQ(file.counts, c.counts);
  EXPECT_EQ(file.design.n_qubits(), 2);
  EXPECT_EQ(file.shots_per_setting(), 1000U);
}

TEST(CountsCsv, RejectsWrongTotalsWithLocation) {
  const ExperimentDesign d(1, {1.0}, 10);
  const std::string text =
      "state_id,time_index,basis,outcome,count\n"
      "0,0,x,+,5\n"
      "0,0,x,-,5\n"
      "0,0,y,+,4\n"
      "0,0,y,-,5\n";
  try {
    parse_counts_csv(text, d);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4U);
    EXPECT_NE(std::string(e.what()).find("basis y"), std::string::npos);
  }
}

TEST(CountsCsv, RejectsMalformedRows) {
  const ExperimentDesign d(1, {1.0}, 10);
  const std::string header = "state_id,time_index,basis,outcome,count\n";
  EXPECT_THROW(parse_counts_csv("wrong\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "0,0,x,+\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "9,0,x,+,10\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "0,0,q,+,10\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "0,0,x,+,-1\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "0,0,x,+,10\r\n", d), ParseError);
  EXPECT_THROW(parse_counts_csv(header + "0,0,x,+,10\n0,0,x,+,0\n", d), ParseError);
  // A partially measured design is fine: absent groups stay absent.
  const CountsTable t = parse_counts_csv(header + "0,0,x,+,10\n0,0,x,-,0\n", d);
  EXPECT_TRUE(t.present[0]);
  EXPECT_FALSE(t.present[1]);
  const FrequencyTensor f = frequencies(t);
  EXPECT_FALSE(f.present(1));
}
