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

#include <algorithm>
#include <cmath>
#include <random>

#include "lqt/diagnostics.hpp"
#include "oracles.hpp"

using namespace lqt;

TEST(Chi2, HandExample) {
  RVec p(2);
  RVec f(2);
  p << 0.5, 0.5;
  f << 0.6, 0.4;
  // 100 * (0.01/0.5 + 0.01/0.5) = 4 over one degree of freedom.
  const ChiSquareReport r = pearson_chi2_rows(p, f, {100.0, 100.0}, {0, 0});
  EXPECT_NEAR(r.chi2, 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.dof, 1.0);
  EXPECT_NEAR(r.sigma, std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(r.capped);
}

TEST(Chi2, ZeroWhenModelMatchesData) {
  RVec p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const ChiSquareReport r = pearson_chi2_rows(p, p, std::vector<double>(4, 1000.0), {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.chi2, 0.0);
}

TEST(Chi2, CappedWhenObservedOutcomeHasZeroProbability) {
  RVec p(2);
  RVec f(2);
  p << 1.0, 0.0;
  f << 0.9, 0.1;
  const ChiSquareReport r = pearson_chi2_rows(p, f, {100.0, 100.0}, {0, 0});
  EXPECT_TRUE(r.capped);
  EXPECT_DOUBLE_EQ(r.chi2, kChi2Cap);
}

TEST(Chi2, InvariantUnderGroupPermutation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const int n_groups = 6;
  RVec p(2 * n_groups);
  RVec f(2 * n_groups);
  std::vector<double> shots;
  std::vector<std::size_t> group;
  for (int g = 0; g < n_groups; ++g) {
    const double a = u(rng) / 1.1;
    const double b = u(rng) / 1.1;
    p.segment(2 * g, 2) << a, 1 - a;
    f.segment(2 * g, 2) << b, 1 - b;
    shots.insert(shots.end(), 2, 50.0 + g);
    group.insert(group.end(), 2, static_cast<std::size_t>(g));
  }
  const double ref = pearson_chi2_rows(p, f, shots, group).chi2;
  std::vector<int> perm(n_groups);
  for (int g = 0; g < n_groups; ++g) perm[g] = g;
  std::shuffle(perm.begin(), perm.end(), rng);
  RVec p2(p.size());
  RVec f2(f.size());
  std::vector<double> s2;
  for (int g = 0; g < n_groups; ++g) {
    p2.segment(2 * g, 2) = p.segment(2 * perm[g], 2);
    f2.segment(2 * g, 2) = f.segment(2 * perm[g], 2);
    s2.insert(s2.end(), 2, shots[2 * perm[g]]);
  }
  EXPECT_NEAR(pearson_chi2_rows(p2, f2, s2, group).chi2, ref, 1e-12 * ref);
}

TEST(Chi2, SampledCountsAreCalibrated) {
  const ExperimentDesign d(1, {1.0}, 1000);
  RVec c = RVec::Zero(3);
  c[0] = M_PI / 4;
  CMat g = CMat::Zero(3, 3);
  g(2, 2) = 0.01;
  const LindbladModel model(1, c, g);
  const ProbabilityTensor p = predicted_probabilities(model, d);
  double sum = 0.0;
  const int repeats = 200;
  for (int r = 0; r < repeats; ++r) {
    sum += pearson_chi2(model, frequencies(sample_counts(p, d, 1000, derive_seed(11, r))), d).chi2;
  }
  // mean of chi2 / dof is 1 with standard error sqrt(2/dof/repeats) ~ 0.024
  EXPECT_NEAR(sum / repeats, 1.0, 0.1);
}

TEST(Frobenius, Examples) {
  CMat a = CMat::Zero(2, 2);
  CMat b = CMat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  EXPECT_NEAR(frobenius_distance(a, b), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(frobenius_distance(CMat::Zero(2, 2), b, true), 1.0, 1e-15);
  EXPECT_THROW(frobenius_distance(a, CMat::Zero(2, 2), true), ValidationError);
}

TEST(NoiseSummary, SingleDephasingJump) {
  CMat g = CMat::Zero(3, 3);
  g(2, 2) = 0.01;
  const NoiseSummary s = noise_summary(g, {}, 1);
  ASSERT_EQ(s.jumps.size(), 3U);
  EXPECT_NEAR(s.jumps[0].rate, 0.01, 1e-15);
  EXPECT_NEAR(std::abs(s.jumps[0].pauli_vector[2] - 1.0), 0.0, 1e-12);
  EXPECT_EQ(s.jumps[0].labels[2], "Z");
  EXPECT_NEAR(s.jumps[1].rate, 0.0, 1e-15);
}

TEST(NoiseSummary, RankTwoHasOrthonormalJumpsAndRatesSumToTrace) {
  std::mt19937_64 rng(5);
  const CMat v = CMat::Random(15, 2);
  const CMat g = v * v.adjoint();
  const NoiseSummary s = noise_summary(g, {}, 2, 1e-10);
  double total = 0.0;
  for (const auto& j : s.jumps) total += j.rate;
  EXPECT_NEAR(total, g.trace().real(), 1e-10);
  EXPECT_GE(s.jumps[0].rate, s.jumps[1].rate);
  EXPECT_FALSE(s.jumps[1].inconclusive);
  EXPECT_TRUE(s.jumps[2].inconclusive);
  EXPECT_NEAR(std::abs(s.jumps[0].pauli_vector.dot(s.jumps[1].pauli_vector)), 0.0, 1e-10);
  EXPECT_NEAR(s.jumps[0].pauli_vector.norm(), 1.0, 1e-12);
}

TEST(NoiseSummary, RateMeasuredForUnitNormPauliJump) {
  // A non-Pauli basis element B_0 = 2 Z: G_00 = g is a rate 4 g for the unit jump Z.
  OperatorBasis b = OperatorBasis::pauli(3);
  b.coeffs(0, 0) = 0.0;
  b.coeffs(0, 2) = 2.0;
  b.coeffs(2, 2) = 0.0;
  b.coeffs(2, 0) = 1.0;
  CMat g = CMat::Zero(3, 3);
  g(0, 0) = 0.01;
  const NoiseSummary s = noise_summary(g, b, 1);
  EXPECT_NEAR(s.jumps[0].rate, 0.04, 1e-15);
  EXPECT_NEAR(std::abs(s.jumps[0].pauli_vector[2]), 1.0, 1e-12);
}

TEST(SparsifyingBasis, UnitaryAndDiagonalizes) {
  const LindbladModel model = structured_noise_G({0.002, 0.001, 0.003, 0.0015, 0.0005});
  const OperatorBasis a = sparsifying_basis(model.g());
  EXPECT_LT((a.coeffs * a.coeffs.adjoint() - CMat::Identity(15, 15)).cwiseAbs().maxCoeff(), 1e-12);
  const CMat gd = from_pauli_matrix(model.g(), a);
  CMat off = gd;
  off.diagonal().setZero();
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 1; i < 15; ++i) EXPECT_GE(gd(i - 1, i - 1).real(), gd(i, i).real() - 1e-15);
  EXPECT_LT((to_pauli_matrix(gd, a) - model.g()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ShotNoiseFloor, VanishesWithoutShotNoise) {
  const ExperimentDesign d(1, {1.0}, std::nullopt);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::rx_half_pi(), d, OperatorBasis::pauli(3));
  ShotNoiseOptions o;
  o.repeats = 2;
  const ShotNoiseFloor f = shot_noise_floor(lin, std::nullopt, o);
  EXPECT_LT(f.median, 1e-8);
  // Exact data has nothing to resample.
  EXPECT_EQ(f.values.size(), 1U);
}

TEST(ShotNoiseFloor, DeterministicForSeed) {
  const ExperimentDesign d(1, {1.0}, 100);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::rx_half_pi(), d, OperatorBasis::pauli(3));
  ShotNoiseOptions o;
  o.repeats = 3;
  o.seed = 9;
  o.max_iter = 200;
  const ShotNoiseFloor a = shot_noise_floor(lin, 100, o);
  const ShotNoiseFloor b = shot_noise_floor(lin, 100, o);
  EXPECT_EQ(a.values, b.values);
  EXPECT_GE(a.median, 0.0);
}
