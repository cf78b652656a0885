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
#include <filesystem>

#include "lqt/linearizer.hpp"
#include "oracles.hpp"

using namespace lqt;

namespace {

LinearizedModel single_qubit(const TargetUnitary& t) {
  const ExperimentDesign d(1, {1.0}, std::nullopt);
  return sensitivity_phi(t, d, OperatorBasis::pauli(3));
}

}  // namespace

TEST(Baseline, Examples) {
  const ExperimentDesign d1(1, {1.0}, std::nullopt);
  const RVec id = unitary_baseline(TargetUnitary::identity(1), d1);
  EXPECT_NEAR(id[static_cast<Eigen::Index>(d1.entry_index(0, 0, 2, 0))], 1.0, 1e-14);
  const RVec rx = unitary_baseline(TargetUnitary::rx_half_pi(), d1);
  EXPECT_NEAR(rx[static_cast<Eigen::Index>(d1.entry_index(0, 0, 2, 0))], 0.5, 1e-14);

  const ExperimentDesign d2(2, {1.0}, std::nullopt);
  const RVec ms = unitary_baseline(TargetUnitary::ms_half_pi(), d2);
  const std::size_t zz = d2.basis_index("zz");
  EXPECT_NEAR(ms[static_cast<Eigen::Index>(d2.entry_index(0, 0, zz, d2.outcome_index("++")))], 0.5, 1e-14);
  EXPECT_NEAR(ms[static_cast<Eigen::Index>(d2.entry_index(0, 0, zz, d2.outcome_index("--")))], 0.5, 1e-14);
  EXPECT_NEAR(ms[static_cast<Eigen::Index>(d2.entry_index(0, 0, zz, d2.outcome_index("+-")))], 0.0, 1e-14);
  EXPECT_NEAR(ms[static_cast<Eigen::Index>(d2.entry_index(0, 0, zz, d2.outcome_index("-+")))], 0.0, 1e-14);
  for (std::size_t g = 0; g < d2.n_groups(); ++g) EXPECT_NEAR(ms.segment(static_cast<Eigen::Index>(4 * g), 4).sum(), 1.0, 1e-13);
}

TEST(FrameMatrix, IdentityRotationAndOrthogonality) {
  const PauliBasis pb(1);
  EXPECT_TRUE(frame_matrix_W(0.0, TargetUnitary::rx_half_pi(), pb).isApprox(CMat::Identity(3, 3)));
  const double theta = 0.7;
  const CMat u = oracle::expm_taylor(cplx(0, -theta / 2) * oracle::pauli(1), 60);
  const RMat w = frame_matrix_full(pb, u);
  // W_ab = Tr{E_a U E_b U^dag}/2: X fixed, Y -> cos Y + sin Z.
  EXPECT_NEAR(w(1, 1), 1.0, 1e-14);
  EXPECT_NEAR(w(2, 2), std::cos(theta), 1e-14);
  EXPECT_NEAR(w(3, 2), std::sin(theta), 1e-14);
  EXPECT_NEAR(w(3, 3), std::cos(theta), 1e-14);
  EXPECT_NEAR(w(2, 3), -std::sin(theta), 1e-14);

  std::mt19937_64 rng(1);
  const PauliBasis pb2(2);
  const CMat h = oracle::random_hermitian(4, rng);
  const CMat u2 = oracle::expm_taylor(cplx(0, -1) * h, 80);
  const RMat w2 = frame_matrix_full(pb2, u2);
  EXPECT_TRUE((w2 * w2.transpose()).isApprox(RMat::Identity(16, 16), 1e-12));
}

TEST(DissipatorCoefficients, PauliAndDampingBases) {
  const PauliBasis pb(1);
  std::mt19937_64 rng(2);
  const CMat rho = oracle::random_psd(2, 1.0, rng);
  auto apply = [&](const CMat& b) {
    CMat out = CMat::Zero(2, 2);
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) out += b(a, c) * pb.element(a) * rho * pb.element(c);
    return out;
  };
  const auto bz = dissipator_coeffs_B(OperatorBasis::pauli(3), pb);
  ASSERT_EQ(bz.size(), 9U);
  const CMat z = oracle::pauli(3);
  EXPECT_LT((apply(bz[2 + 2 * 3]) - (z * rho * z - rho)).norm(), 1e-14);
  EXPECT_NEAR(std::abs(bz[2 + 2 * 3](3, 3) - cplx(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(bz[2 + 2 * 3](0, 0) - cplx(-1, 0)), 0.0, 1e-15);

  OperatorBasis damp;
  damp.coeffs = CMat::Zero(3, 3);
  damp.coeffs << cplx(0.5, 0), cplx(0, -0.5), 0, cplx(0.5, 0), cplx(0, 0.5), 0, 0, 0, 1;
  const auto bd = dissipator_coeffs_B(damp, pb);
  CMat sm(2, 2);
  sm << 0, 0, 1, 0;
  const CMat ref = sm * rho * sm.adjoint() - 0.5 * (sm.adjoint() * sm * rho + rho * sm.adjoint() * sm);
  EXPECT_LT((apply(bd[0]) - ref).norm(), 1e-14);
}

TEST(Sensitivity, DephasingExampleAndConservation) {
  const LinearizedModel lin = single_qubit(TargetUnitary::identity(1));
  const std::size_t e = lin.design.entry_index(2, 0, 0, 0);
  EXPECT_NEAR(std::abs(lin.phi_matrix(e)(2, 2) - cplx(-1, 0)), 0.0, 1e-12);
  CMat g = CMat::Zero(3, 3);
  g(2, 2) = 0.01;
  const RVec p = linear_probability(lin, g);
  EXPECT_NEAR(p[static_cast<Eigen::Index>(e)], 0.99, 1e-12);
  EXPECT_NEAR(0.5 * (1.0 + std::exp(-0.02)), 0.990099, 1e-6);
  EXPECT_NEAR(p[static_cast<Eigen::Index>(e)] - 0.5 * (1.0 + std::exp(-0.02)), -9.9e-5, 1e-6);
  EXPECT_TRUE(linear_probability(lin, CMat::Zero(3, 3)).isApprox(lin.p_u));
}

TEST(Sensitivity, HermitianPairingAndConservationTwoQubits) {
  const ExperimentDesign d(2, {0.5, 1.0}, std::nullopt);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::ms_half_pi(), d, OperatorBasis::pauli(15));
  for (std::size_t e = 0; e < lin.n_entries(); e += 7) {
    const CMat phi = lin.phi_matrix(e);
    EXPECT_LT((phi - phi.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
  }
  for (std::size_t g = 0; g < d.n_groups(); ++g) {
    CMat sum = CMat::Zero(15, 15);
    for (std::size_t m = 0; m < 4; ++m) sum += lin.phi_matrix(4 * g + m);
    EXPECT_LT(sum.cwiseAbs().maxCoeff(), 1e-12);
  }
  std::mt19937_64 rng(3);
  const CMat h = oracle::random_hermitian(15, rng);
  const CVec pc = linear_probability_complex(lin, h);
  EXPECT_LT(pc.imag().cwiseAbs().maxCoeff(), 1e-12);
  const RVec pr = linear_probability(lin, h);
  for (std::size_t g = 0; g < d.n_groups(); ++g) EXPECT_NEAR(pr.segment(static_cast<Eigen::Index>(4 * g), 4).sum(), 1.0, 1e-11);
}

TEST(Sensitivity, InformationalCompleteness) {
  const ExperimentDesign d(2, {1.0}, std::nullopt);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::ms_half_pi(), d, OperatorBasis::pauli(15));
  const auto ind = d.independent_entries();
  RMat a(static_cast<Eigen::Index>(ind.size()), lin.a.cols());
  for (std::size_t r = 0; r < ind.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = lin.a.row(static_cast<Eigen::Index>(ind[r]));
  // Every real parameter of G is determined.
  Eigen::ColPivHouseholderQR<RMat> qr(a);
  qr.setThreshold(1e-10);
  EXPECT_EQ(qr.rank(), 225);

  // The configuration functionals rho -> Tr{P E(rho_s)} span at least the 240 trace-preserving directions.
  CMat f(static_cast<Eigen::Index>(ind.size()), 256);
  for (std::size_t r = 0; r < ind.size(); ++r) {
    const std::size_t e = ind[r];
    const std::size_t b = (d.group_of(e)) % d.n_bases();
    const std::size_t s = d.group_of(e) / d.n_bases();
    const CMat& p = d.projectors()[b * 4 + d.outcome_of(e)];
    const CMat& rho = d.initial_states().states[s];
    const CMat outer = oracle::kron(Eigen::Map<const CVec>(rho.data(), 16).transpose(),
                                    Eigen::Map<const CVec>(CMat(p.transpose()).data(), 16).transpose());
    f.row(static_cast<Eigen::Index>(r)) = outer.row(0);
  }
  Eigen::FullPivLU<CMat> lu(f);
  EXPECT_GE(lu.rank(), 240);
}

TEST(Packing, RoundTrips) {
  std::mt19937_64 rng(4);
  const HermitianPacking pk(15);
  const CMat g = oracle::random_hermitian(15, rng);
  EXPECT_TRUE(pk.unpack(pk.pack(g)).isApprox(g));
  const CMat r = oracle::random_hermitian(15, rng);
  EXPECT_TRUE(pk.unpack_gradient(pk.pack_gradient(r)).isApprox(r));
  // <grad, dx> equals Tr{R dG} for Hermitian directions.
  const CMat dg = oracle::random_hermitian(15, rng);
  EXPECT_NEAR(pk.pack_gradient(r).dot(pk.pack(dg)), (r * dg).trace().real(), 1e-10);
  EXPECT_EQ(pk.offdiag_offset(0, 1), 15U);
}

TEST(Sensitivity, PackedRowsMatchComplexEvaluation) {
  const ExperimentDesign d(2, {1.0}, std::nullopt);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::ms_half_pi(), d, OperatorBasis::pauli(15));
  std::mt19937_64 rng(5);
  const CMat g = oracle::random_psd(15, 0.1, rng);
  const RVec via_rows = lin.p_u + lin.a * lin.packing().pack(g);
  EXPECT_LT((via_rows - linear_probability(lin, g)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Cache, RoundTripAndHash) {
  const LinearizedModel lin = single_qubit(TargetUnitary::rx_half_pi());
  const auto path = std::filesystem::temp_directory_path() / "lqt_test_cache.bin";
  write_linear_model(lin, path);
  const LinearizedModel back = read_linear_model(path);
  EXPECT_EQ(back.hash, lin.hash);
  EXPECT_EQ(back.quadrature_steps, lin.quadrature_steps);
  EXPECT_EQ(back.target_name, "rx_half_pi");
  EXPECT_TRUE(back.p_u == lin.p_u);
  EXPECT_TRUE(back.phi == lin.phi);
  EXPECT_TRUE(back.a == lin.a);
  const ExperimentDesign d(1, {1.0}, std::nullopt);
  EXPECT_NE(linear_model_hash(TargetUnitary::rx_half_pi(), d, OperatorBasis::pauli(3), 64),
            linear_model_hash(TargetUnitary::identity(1), d, OperatorBasis::pauli(3), 64));
  EXPECT_NE(linear_model_hash(TargetUnitary::rx_half_pi(), d, OperatorBasis::pauli(3), 64),
            linear_model_hash(TargetUnitary::rx_half_pi(), d, OperatorBasis::pauli(3), 128));
}

TEST(Sensitivity, SizeGuard) {
  const ExperimentDesign d(3, {1.0}, std::nullopt);
  EXPECT_THROW(sensitivity_phi(TargetUnitary::identity(3), d, OperatorBasis::pauli(63)), SizeLimitError);
}
