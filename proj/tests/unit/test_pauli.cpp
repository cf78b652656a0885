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

#include "lqt/pauli.hpp"
#include "oracles.hpp"

using namespace lqt;

TEST(Pauli, SingleQubitElements) {
  const PauliBasis b(1);
  ASSERT_EQ(b.size(), 4U);
  for (int a = 0; a < 4; ++a) EXPECT_TRUE(b.element(a).isApprox(oracle::pauli(a)));
}

TEST(Pauli, TwoQubitOrderingAndOrthogonality) {
  const PauliBasis b(2);
  ASSERT_EQ(b.size(), 16U);
  EXPECT_TRUE(b.element(5).isApprox(oracle::kron(oracle::pauli(1), oracle::pauli(1))));
  EXPECT_EQ(b.label(5), "XX");
  EXPECT_EQ(b.label(7), "XZ");
  EXPECT_EQ(b.index_of("ZY"), 14U);
  for (std::size_t a = 0; a < 16; ++a) {
    EXPECT_TRUE(b.element(a).isApprox(oracle::pauli_word(a, 2)));
    EXPECT_TRUE((b.element(a) * b.element(a)).isApprox(CMat::Identity(4, 4)));
    EXPECT_TRUE(b.element(a).isApprox(b.element(a).adjoint()));
    for (std::size_t c = 0; c < 16; ++c) {
      const cplx tr = (b.element(a).adjoint() * b.element(c)).trace();
      EXPECT_NEAR(std::abs(tr - cplx(a == c ? 4.0 : 0.0, 0.0)), 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(std::abs(b.element(0).trace() - cplx(4, 0)), 0.0, 1e-15);
  for (std::size_t a = 1; a < 16; ++a) EXPECT_NEAR(std::abs(b.element(a).trace()), 0.0, 1e-15);
}

TEST(Pauli, ProductsMatchDenseMultiplication) {
  for (int n : {1, 2}) {
    const PauliBasis b(n);
    for (std::size_t a = 0; a < b.size(); ++a) {
      for (std::size_t c = 0; c < b.size(); ++c) {
        const PauliProduct p = b.product(a, c);
        const CMat dense = oracle::pauli_word(a, n) * oracle::pauli_word(c, n);
        EXPECT_TRUE((to_complex(p.phase) * oracle::pauli_word(p.index, n)).isApprox(dense)) << a << " " << c;
      }
    }
  }
  const PauliBasis b(1);
  const PauliProduct xy = b.product(1, 2);
  EXPECT_EQ(xy.phase, Phase::kI);
  EXPECT_EQ(xy.index, 3U);
  EXPECT_EQ(b.product(0, 2).index, 2U);
  EXPECT_EQ(b.product(0, 2).phase, Phase::kOne);
}

TEST(Pauli, TripleTraceMatchesDense) {
  const PauliBasis b(1);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t d = 0; d < 4; ++d) {
      for (std::size_t g = 0; g < 4; ++g) {
        const cplx dense = (oracle::pauli(a).adjoint() * oracle::pauli(d).adjoint() * oracle::pauli(g)).trace();
        EXPECT_NEAR(std::abs(b.triple_trace(a, d, g) - dense), 0.0, 1e-14);
      }
    }
  }
  // Tr{X^dag Y^dag Z} = Tr{X Y Z} = 2i
  EXPECT_NEAR(std::abs(b.triple_trace(1, 2, 3) - cplx(0, 2)), 0.0, 1e-14);
  const PauliBasis b2(2);
  for (std::size_t beta = 0; beta < 16; ++beta) EXPECT_NEAR(std::abs(b2.triple_trace(0, beta, beta) - cplx(4, 0)), 0.0, 1e-14);
}

TEST(Pauli, DecomposeComposeRoundTrip) {
  std::mt19937_64 rng(4);
  const PauliBasis b(2);
  const CMat h = oracle::random_hermitian(4, rng);
  const CVec c = b.decompose(h);
  EXPECT_TRUE(b.compose(c).isApprox(h, 1e-12));
  for (Eigen::Index a = 0; a < c.size(); ++a) EXPECT_NEAR(c[a].imag(), 0.0, 1e-12);
}

TEST(Pauli, SizeGuard) {
  EXPECT_THROW(PauliBasis(0), SizeLimitError);
  EXPECT_THROW(PauliBasis(5), SizeLimitError);
  EXPECT_NO_THROW(PauliBasis(3));
  EXPECT_THROW(PauliBasis(1).index_of("Q"), ValidationError);
}
