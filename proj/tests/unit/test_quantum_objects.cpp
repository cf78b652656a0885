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

#include "lqt/quantum_objects.hpp"
#include "oracles.hpp"

using namespace lqt;

TEST(States, SingleQubitSet) {
  const StateSet s = standard_initial_states(1);
  ASSERT_EQ(s.states.size(), 4U);
  CMat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_TRUE(s.states[2].isApprox(plus));
}

TEST(States, TwoQubitSetIsValidAndComplete) {
  const StateSet s = standard_initial_states(2);
  ASSERT_EQ(s.states.size(), 16U);
  CMat stack(16, 16);
  for (std::size_t k = 0; k < 16; ++k) {
    const CMat& r = s.states[k];
    EXPECT_NEAR(std::abs(r.trace() - cplx(1, 0)), 0.0, 1e-12);
    EXPECT_TRUE(r.isApprox(r.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMat> es(r);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    stack.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const CVec>(r.data(), 16);
  }
  Eigen::FullPivLU<CMat> lu(stack);
  EXPECT_EQ(lu.rank(), 16);
}

TEST(Projectors, Examples) {
  CMat z(2, 2);
  z << 1, 0, 0, 0;
  EXPECT_TRUE(projector({"z", "+"}).isApprox(z));
  CMat xm(2, 2);
  xm << 0.5, -0.5, -0.5, 0.5;
  EXPECT_TRUE(projector({"x", "-"}).isApprox(xm));
  const CMat p = projector({"xz", "+-"});
  EXPECT_TRUE(p.isApprox(oracle::kron(projector({"x", "+"}), projector({"z", "-"}))));
  EXPECT_TRUE((p * p).isApprox(p));
  EXPECT_NEAR(p.trace().real(), 1.0, 1e-14);
  EXPECT_THROW(projector({"xq", "++"}), ValidationError);
}

TEST(Design, ConfigurationCounts) {
  const ExperimentDesign d1(1, {1.0}, 10000);
  EXPECT_EQ(d1.independent_entries().size(), 12U);
  EXPECT_EQ(d1.n_independent_per_time(), 12U);
  const ExperimentDesign d2(2, {1.0}, std::nullopt);
  EXPECT_EQ(d2.independent_entries().size(), 432U);
  EXPECT_EQ(d2.n_entries(), 576U);
  const ExperimentDesign d3(2, {0.5, 1.0}, 100);
  EXPECT_EQ(d3.independent_entries().size(), 864U);
}

TEST(Design, IndexingRoundTrip) {
  const ExperimentDesign d(2, {0.5, 1.0}, 100);
  for (std::size_t e = 0; e < d.n_entries(); ++e) {
    const Configuration c = d.configuration(e);
    const std::size_t b = d.basis_index(c.basis);
    const std::size_t m = d.outcome_index(c.outcome);
    EXPECT_EQ(d.entry_index(c.state_id, c.time_index, b, m), e);
    EXPECT_EQ(c.independent, m != d.dim() - 1);
  }
  EXPECT_EQ(d.basis_word(0), "xx");
  EXPECT_EQ(d.basis_word(8), "zz");
  EXPECT_EQ(d.outcome_word(3), "--");
}

TEST(Design, Validation) {
  EXPECT_THROW(ExperimentDesign(1, {}, 10), ValidationError);
  EXPECT_THROW(ExperimentDesign(1, {1.0, 0.5}, 10), ValidationError);
  EXPECT_THROW(ExperimentDesign(1, {-1.0}, 10), ValidationError);
  EXPECT_THROW(ExperimentDesign(1, {1.0}, 0), ValidationError);
  EXPECT_THROW(ExperimentDesign(5, {1.0}, 10), SizeLimitError);
}
