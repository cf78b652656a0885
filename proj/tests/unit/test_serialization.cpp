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
#include <random>

#include "lqt/serialization.hpp"
#include "oracles.hpp"

using namespace lqt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lqt_ser_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(ModelJson, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  const RVec c = RVec::Random(15);
  const LindbladModel m(2, c, oracle::random_psd(15, 0.3, rng));
  const fs::path path = scratch_dir("model") / "m.json";
  write_model(m, path);
  const LindbladModel back = read_model(path);
  EXPECT_EQ(back.n_qubits(), 2);
  EXPECT_EQ(back.c(), m.c());
  EXPECT_EQ(back.g(), m.g());
  EXPECT_TRUE(back.basis().is_identity());
}

TEST(ModelJson, CustomBasisRoundTrip) {
  OperatorBasis b = OperatorBasis::pauli(3);
  b.coeffs(0, 1) = cplx(0.5, 0.25);
  CMat g = CMat::Zero(3, 3);
  g(1, 1) = 0.1;
  const LindbladModel m(1, RVec::Zero(3), g, b);
  const LindbladModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.basis().coeffs, b.coeffs);
}

TEST(ModelJson, RejectsBadDocuments) {
  ordered_json j = model_to_json(LindbladModel(1, RVec::Zero(3), CMat::Zero(3, 3)));
  ordered_json wrong_version = j;
  wrong_version["format_version"] = 99;
  EXPECT_THROW(model_from_json(wrong_version), ParseError);
  ordered_json missing = j;
  missing.erase("G");
  EXPECT_THROW(model_from_json(missing), ParseError);
  ordered_json not_psd = j;
  not_psd["G"][0][0] = {-1.0, 0.0};
  EXPECT_THROW(model_from_json(not_psd), Error);
}

TEST(ResultJson, RoundTripAndNoWallClock) {
  EstimationResult r;
  r.method = Method::kCs;
  r.g_hat = CMat::Identity(3, 3) * 0.01;
  r.iterations = 2;
  r.seconds = 12.5;
  r.residual_norm = 1e-3;
  r.feasible = true;
  TraceRecord t;
  t.iteration = 1;
  t.cost = 0.5;
  t.elapsed_seconds = 3.0;
  r.trace.push(t);
  Provenance p{"1.0.0", 7, true, 0xabcULL, "estimate"};
  const ordered_json j = result_to_json(r, p, {{"n_qubits", 1}});
  EXPECT_EQ(j["n_qubits"], 1);
  EXPECT_EQ(j["provenance"]["seed"], 7);
  const std::string text = j.dump();
  EXPECT_EQ(text.find("elapsed"), std::string::npos);
  EXPECT_EQ(text.find("seconds"), std::string::npos);
  const EstimationResult back = result_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.method, Method::kCs);
  EXPECT_EQ(back.g_hat, r.g_hat);
  EXPECT_EQ(back.iterations, 2);
  const ordered_json timing = timing_to_json(r);
  EXPECT_DOUBLE_EQ(timing["seconds"].get<double>(), 12.5);
  EXPECT_EQ(timing_sidecar_path("out/est.json"), fs::path("out/est.timing.json"));
}

TEST(Provenance, CommentAndJson) {
  Provenance p{"1.0.0", 0, false, 1, ""};
  const std::string c = provenance_comment(p);
  EXPECT_NE(c.find("# tool_version: 1.0.0\n"), std::string::npos);
  EXPECT_NE(c.find("# seed: none\n"), std::string::npos);
  EXPECT_TRUE(provenance_to_json(p)["seed"].is_null());
}

TEST(ProbabilityFile, ReadsBackAsExactFrequencies) {
  const ExperimentDesign d(1, {0.5, 1.0}, std::nullopt);
  RVec c = RVec::Zero(3);
  c[0] = 0.3;
  CMat g = CMat::Zero(3, 3);
  g(2, 2) = 0.02;
  const ProbabilityTensor p = predicted_probabilities(LindbladModel(1, c, g), d);
  const fs::path path = scratch_dir("prob") / "p.csv";
  write_probabilities(p, d, path);
  const auto [design, freq] = read_frequency_file(path);
  EXPECT_EQ(design.times(), d.times());
  EXPECT_FALSE(design.shots_per_setting().has_value());
  EXPECT_TRUE(freq.infinite_shots());
  ASSERT_EQ(freq.values.size(), p.size());
  for (std::size_t e = 0; e < p.size(); ++e) EXPECT_NEAR(freq.values[e], p[e], 1e-15);
}

TEST(ProbabilityFile, CountsFileIsAlsoAccepted) {
  const ExperimentDesign d(1, {1.0}, 50);
  const ProbabilityTensor p = predicted_probabilities(LindbladModel(1, RVec::Zero(3), CMat::Zero(3, 3)), d);
  const CountsTable counts = sample_counts(p, d, 50, 3);
  const fs::path path = scratch_dir("cnt") / "c.csv";
  write_counts(counts, path);
  const auto [design, freq] = read_frequency_file(path);
  EXPECT_EQ(design.shots_per_setting().value_or(0), 50U);
  EXPECT_EQ(freq.values, frequencies(counts).values);
}
