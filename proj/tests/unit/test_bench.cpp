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

#include <atomic>
#include <cmath>
#include <vector>

#include "lqt/bench.hpp"

using namespace lqt::bench;

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({0.0, 10.0}, 0.2), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, NAN, 3.0}, 1.0), 3.0);
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
}

TEST(ParallelFor, EveryIndexOnceAndSameResultForAnyJobCount) {
  auto run = [](unsigned jobs) {
    std::vector<double> out(97, 0.0);
    std::vector<std::atomic<int>> hits(97);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      out[i] = std::sin(static_cast<double>(i));
      ++hits[i];
    });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    return out;
  };
  EXPECT_EQ(run(1), run(3));
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(8, 2, [](std::size_t i) {
                 if (i == 5) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(BenchCsv, HeaderAndRows) {
  BenchResult r;
  r.figure = 3;
  r.x_name = "iteration";
  r.series.push_back({"dia", {0.0, 1.0}, {{1.0, 2.0, 3.0}, {0.5, 0.5, 0.5}}});
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.rfind("series,iteration,percentile20,median,percentile80\n", 0), 0U);
  const auto rows = r.rows();
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_DOUBLE_EQ(rows[0].median, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].p20, 1.4);
  EXPECT_THROW(r.get("cs"), lqt::Error);
}

TEST(Figure3, SmallRunIsDeterministicAcrossJobCounts) {
  BenchOptions o;
  o.repeats = 2;
  o.max_iter = 20;
  const BenchResult a = figure3(o);
  o.jobs = 2;
  const BenchResult b = figure3(o);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(a.get("hs_dia").x.size(), 21U);
}
