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

#include <cmath>

#include "lqt/expm.hpp"
#include "lqt/lindblad.hpp"
#include "oracles.hpp"

using namespace lqt;

namespace {

LindbladModel dephasing(double gamma) {
  CMat g = CMat::Zero(3, 3);
  g(2, 2) = gamma;
  return LindbladModel(1, RVec::Zero(3), g);
}

LindbladModel random_model(int n, std::mt19937_64& rng, double trace = 0.2) {
  const std::size_t k = (std::size_t{1} << (2 * n)) - 1;
  std::normal_distribution<double> nd(0.0, 0.5);
  RVec c(static_cast<Eigen::Index>(k));
  for (Eigen::Index a = 0; a < c.size(); ++a) c[a] = nd(rng);
  return LindbladModel(n, c, oracle::random_psd(k, trace, rng));
}

}  // namespace

TEST(Liouvillian, ZeroGenerator) {
  const CMat l = build_liouvillian(LindbladModel(2, RVec::Zero(15), CMat::Zero(15, 15)));
  EXPECT_TRUE(l.isZero());
}

TEST(Liouvillian, DephasingDecaysCoherence) {
  const double gamma = 0.3;
  const CMat l = build_liouvillian(dephasing(gamma));
  CMat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const CMat drho = devectorize(l * vectorize(plus), 2);
  const double dx = (drho * oracle::pauli(1)).trace().real();
  EXPECT_NEAR(dx, -2.0 * gamma * 1.0, 1e-14);
}

TEST(Liouvillian, MatchesDenseGeneratorAndPreservesTrace) {
  std::mt19937_64 rng(7);
  const LindbladModel m = random_model(2, rng);
  const CMat l = build_liouvillian(m);
  const auto ops = oracle::traceless_paulis(2);
  const CMat h = m.hamiltonian();
  const CMat rho = oracle::random_psd(4, 1.0, rng);
  const CMat ref = oracle::lindblad_rhs(h, m.g(), ops, rho);
  EXPECT_LT((devectorize(l * vectorize(rho), 4) - ref).norm(), 1e-12);
  // Left null vector: vec(1)^dag L = 0.
  const CVec one = vectorize(CMat::Identity(4, 4));
  EXPECT_LT((one.adjoint() * l).norm(), 1e-10);
}

TEST(Liouvillian, JumpFormAgrees) {
  const auto ops = oracle::traceless_paulis(1);
  CMat g = CMat::Zero(3, 3);
  g(0, 0) = 0.25;
  g(0, 1) = cplx(0, 0.25);
  g(1, 0) = cplx(0, -0.25);
  g(1, 1) = 0.25;
  // sigma_- = (X - iY)/2 gives G = 1/4 [[1, i], [-i, 1]] on (x, y).
  CMat sm(2, 2);
  sm << 0, 0, 1, 0;
  const CMat h = CMat::Zero(2, 2);
  std::vector<CMat> b = {oracle::pauli(1), oracle::pauli(2), oracle::pauli(3)};
  EXPECT_LT((liouvillian(h, g, b) - liouvillian_from_jumps(h, {sm})).norm(), 1e-14);
}

TEST(Propagate, Examples) {
  CMat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_TRUE(propagate(LindbladModel(1, RVec::Zero(3), CMat::Zero(3, 3)), plus, 2.0).isApprox(plus));
  const CMat rho = propagate(dephasing(0.05), plus, 1.0);
  EXPECT_NEAR((rho * oracle::pauli(1)).trace().real(), std::exp(-0.1), 1e-12);
  EXPECT_NEAR((rho * oracle::pauli(1)).trace().real(), 0.904837, 1e-6);

  RVec c = RVec::Zero(3);
  c[0] = M_PI / 4.0;
  CMat zero(2, 2);
  zero << 1, 0, 0, 0;
  const CMat r = propagate(LindbladModel(1, c, CMat::Zero(3, 3)), zero, 1.0);
  const CMat u = oracle::expm_taylor(cplx(0, -M_PI / 4.0) * oracle::pauli(1), 60);
  EXPECT_TRUE(r.isApprox(u * zero * u.adjoint(), 1e-12));
  EXPECT_NEAR((r * oracle::pauli(3)).trace().real(), 0.0, 1e-12);
  EXPECT_NEAR((r * oracle::pauli(2)).trace().real(), -1.0, 1e-12);
}

TEST(Propagate, MatchesRungeKuttaAndSemigroup) {
  std::mt19937_64 rng(11);
  const auto ops = oracle::traceless_paulis(2);
  const StateSet states = standard_initial_states(2);
  for (int trial = 0; trial < 3; ++trial) {
    const LindbladModel m = random_model(2, rng);
    const CMat& rho0 = states.states[static_cast<std::size_t>(trial * 5)];
    const CMat ref = oracle::rk4(m.hamiltonian(), m.g(), ops, rho0, 1.0, 2000);
    EXPECT_LT((propagate(m, rho0, 1.0) - ref).cwiseAbs().maxCoeff(), 1e-9);
    const CMat two = propagate(m, propagate(m, rho0, 0.4), 0.6);
    EXPECT_LT((two - propagate(m, rho0, 1.0)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Jumps, DiagonalAndRankOne) {
  const JumpDecomposition j = jump_decomposition(dephasing(0.07));
  EXPECT_NEAR(j.rates[0], 0.07, 1e-14);
  EXPECT_NEAR(j.rates[1], 0.0, 1e-14);
  EXPECT_TRUE((j.jump_ops[0] * j.jump_ops[0].adjoint()).isApprox(CMat::Identity(2, 2)));
  EXPECT_NEAR(std::abs(j.coefficients[0][2]), 1.0, 1e-14);

  std::mt19937_64 rng(2);
  CVec v = CVec::Random(15);
  v.normalize();
  const JumpDecomposition r = jump_decomposition(LindbladModel(2, RVec::Zero(15), 0.3 * v * v.adjoint()));
  EXPECT_NEAR(r.rates[0], 0.3, 1e-12);
  EXPECT_NEAR(r.rates[1], 0.0, 1e-12);
}

TEST(Jumps, RejectsNonPsd) {
  CMat g = CMat::Zero(3, 3);
  g(0, 0) = -0.1;
  EXPECT_THROW(LindbladModel(1, RVec::Zero(3), g), NotPsdError);
  CMat nh = CMat::Zero(3, 3);
  nh(0, 1) = 1.0;
  EXPECT_THROW(LindbladModel(1, RVec::Zero(3), nh), ValidationError);
}

TEST(Samplers, HsRandomProperties) {
  std::mt19937_64 rng(3);
  double mean_max = 0.0;
  for (int i = 0; i < 200; ++i) {
    const CMat g = sample_hs_random_G(15, 0.25, rng);
    EXPECT_NEAR(g.trace().real(), 0.25, 1e-12);
    EXPECT_TRUE(g.isApprox(g.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMat> es(g);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-14);
    mean_max += es.eigenvalues().maxCoeff();
  }
  // Independent oracle: normalized Wishart (Ginibre 15x15) spectra.
  double oracle_max = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::SelfAdjointEigenSolver<CMat> es(oracle::random_psd(15, 0.25, rng));
    oracle_max += es.eigenvalues().maxCoeff();
  }
  EXPECT_NEAR(mean_max / 200, oracle_max / 200, 0.1 * oracle_max / 200);
}

TEST(Samplers, ProjectorSpectrum) {
  std::mt19937_64 rng(4);
  const CMat g1 = sample_projector_G(15, 1, 0.01, rng);
  Eigen::SelfAdjointEigenSolver<CMat> e1(g1);
  EXPECT_NEAR(e1.eigenvalues()[14], 0.01, 1e-14);
  EXPECT_NEAR(e1.eigenvalues()[13], 0.0, 1e-14);
  const CMat g3 = sample_projector_G(15, 3, 0.3, rng);
  Eigen::SelfAdjointEigenSolver<CMat> e3(g3);
  for (int i = 12; i < 15; ++i) EXPECT_NEAR(e3.eigenvalues()[i], 0.1, 1e-13);
  EXPECT_NEAR(e3.eigenvalues()[11], 0.0, 1e-13);
  EXPECT_THROW(sample_projector_G(15, 0, 0.1, rng), ValidationError);
}

TEST(Samplers, HaarUnitary) {
  std::mt19937_64 rng(5);
  const CMat u = haar_unitary(8, rng);
  EXPECT_TRUE((u * u.adjoint()).isApprox(CMat::Identity(8, 8), 1e-12));
}

TEST(StructuredNoise, SingleChannels) {
  StructuredRates bf;
  bf.bit_flip = 0.02;
  const CMat g = structured_noise_G(bf).g();
  const PauliBasis pb(2);
  const Eigen::Index xx = static_cast<Eigen::Index>(pb.index_of("XX")) - 1;
  EXPECT_NEAR(std::abs(g(xx, xx) - cplx(0.02, 0)), 0.0, 1e-15);
  EXPECT_NEAR(g.norm(), 0.02, 1e-15);

  StructuredRates damp;
  damp.damping_1 = 0.04;
  const CMat gd = structured_noise_G(damp).g();
  const Eigen::Index x1 = static_cast<Eigen::Index>(pb.index_of("XI")) - 1;
  const Eigen::Index y1 = static_cast<Eigen::Index>(pb.index_of("YI")) - 1;
  EXPECT_NEAR(std::abs(gd(x1, x1) - cplx(0.01, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(gd(y1, y1) - cplx(0.01, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(gd(x1, y1) - cplx(0, 0.01)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(gd(y1, x1) - cplx(0, -0.01)), 0.0, 1e-15);
}

TEST(StructuredNoise, DecompositionRecoversRates) {
  const StructuredRates r{0.02, 0.01, 0.03, 0.015, 0.005};
  const LindbladModel m = structured_noise_G(r);
  const JumpDecomposition j = jump_decomposition(m);
  // sigma_- carries Pauli norm 1/2, so its G eigenvalue is gamma/2.
  const std::vector<double> expected = {0.02, 0.015, 0.01, 0.0075, 0.005};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(j.rates[i], expected[i], 1e-14);
  EXPECT_NEAR(j.rates[5], 0.0, 1e-14);
  // The generator rebuilt from the decomposed jumps is the original one.
  std::vector<CMat> jumps;
  for (std::size_t i = 0; i < 5; ++i) jumps.push_back(std::sqrt(j.rates[i]) * j.jump_ops[i]);
  EXPECT_LT((liouvillian_from_jumps(CMat::Zero(4, 4), jumps) - build_liouvillian(m)).norm(), 1e-14);
  // And from the named operators.
  const auto named = structured_jump_operators();
  const std::vector<double> rates = {r.dephasing_1, r.dephasing_2, r.damping_1, r.damping_2, r.bit_flip};
  std::vector<CMat> scaled;
  for (std::size_t i = 0; i < 5; ++i) scaled.push_back(std::sqrt(rates[i]) * named[i]);
  EXPECT_LT((liouvillian_from_jumps(CMat::Zero(4, 4), scaled) - build_liouvillian(m)).norm(), 1e-14);
}

TEST(Probabilities, Examples) {
  const ExperimentDesign d(1, {1.0}, std::nullopt);
  const std::size_t plus_x_plus = d.entry_index(2, 0, 0, 0);
  const ProbabilityTensor p0 = predicted_probabilities(LindbladModel(1, RVec::Zero(3), CMat::Zero(3, 3)), d);
  EXPECT_NEAR(p0[plus_x_plus], 1.0, 1e-14);
  EXPECT_NEAR(p0[plus_x_plus + 1], 0.0, 1e-14);
  const ProbabilityTensor p = predicted_probabilities(dephasing(0.05), d);
  EXPECT_NEAR(p[plus_x_plus], 0.5 * (1.0 + std::exp(-0.1)), 1e-12);
  EXPECT_NEAR(p[plus_x_plus], 0.95242, 1e-5);
}

TEST(Probabilities, MatchRungeKuttaOnRandomModels) {
  std::mt19937_64 rng(8);
  const ExperimentDesign d(2, {1.0}, std::nullopt);
  const auto ops = oracle::traceless_paulis(2);
  const LindbladModel m = random_model(2, rng);
  const ProbabilityTensor p = predicted_probabilities(m, d);
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    const CMat rho = oracle::rk4(m.hamiltonian(), m.g(), ops, d.initial_states().states[s], 1.0, 1000);
    for (std::size_t b = 0; b < d.n_bases(); ++b) {
      double sum = 0.0;
      for (std::size_t o = 0; o < d.dim(); ++o) {
        const double ref = (d.projectors()[b * d.dim() + o] * rho).trace().real();
        EXPECT_NEAR(p[d.entry_index(s, 0, b, o)], ref, 1e-9);
        sum += p[d.entry_index(s, 0, b, o)];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}
