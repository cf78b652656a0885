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
#include <string>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/experiment.hpp"
#include "lqt/lindblad.hpp"
#include "lqt/linearizer.hpp"

namespace lqt {

/// Value reported when a model assigns p = 0 to an observed outcome.
inline constexpr double kChi2Cap = 1e12;

/// Reduced Pearson chi^2.
///
/// chi2 = sum_g N_g sum_m (p - f)^2 / p divided by the number of independent terms
/// (sum over groups of outcomes - 1), so a correct model gives mean 1 with standard
/// deviation sigma = sqrt(2 / dof).
struct ChiSquareReport {
  double chi2 = 0.0;
  double sigma = 0.0;
  double dof = 0.0;
  std::size_t n_terms = 0;
  std::size_t n_groups = 0;
  /// Smallest N_g p over the included terms.
  double min_expected_count = 0.0;
  /// False when any expected count is below 5.
  bool valid = true;
  /// True when chi2 was replaced by kChi2Cap.
  bool capped = false;
};

/// Row-level form: `group` labels consecutive rows of the same setting, `shots` is N_g per row.
ChiSquareReport pearson_chi2_rows(const RVec& p, const RVec& f, const std::vector<double>& shots,
                                  const std::vector<std::size_t>& group);

/// Over every present group of the design. With include_dependent = false the
/// last outcome of each group is left out.
ChiSquareReport pearson_chi2(const ProbabilityTensor& probabilities, const FrequencyTensor& freq,
                             const ExperimentDesign& design, bool include_dependent = true);
ChiSquareReport pearson_chi2(const LindbladModel& model, const FrequencyTensor& freq, const ExperimentDesign& design);
ChiSquareReport pearson_chi2(const LinearizedModel& lin, const CMat& g, const FrequencyTensor& freq);

/// ||A - B||_F, divided by ||B||_F when normalized.
double frobenius_distance(const CMat& a, const CMat& b, bool normalized = false);

struct ShotNoiseFloor {
  double median = 0.0;
  /// Largest eigenvalue of the estimate per repeat.
  std::vector<double> values;
};

struct ShotNoiseOptions {
  std::size_t repeats = 20;
  std::uint64_t seed = 0;
  int max_iter = 5000;
  double eta_prime = 0.3;
};

/// Samples counts from the ideal-gate distribution p_u, estimates G with DIA and
/// takes the largest eigenvalue; the median over repeats is the floor. A design
/// without a shot budget yields exact frequencies instead of samples.
ShotNoiseFloor shot_noise_floor(const LinearizedModel& lin, std::optional<std::uint64_t> shots_per_setting,
                                const ShotNoiseOptions& options);

struct JumpSummary {
  double rate = 0.0;
  /// Unit-norm Pauli coefficients over the traceless words, index alpha - 1.
  CVec pauli_vector;
  std::vector<std::string> labels;
  bool inconclusive = false;
};

struct NoiseSummary {
  std::vector<JumpSummary> jumps;  // descending rate
  double shot_noise_floor = 0.0;
};

/// Eigen-decomposition of G into rates and Pauli-word jump vectors; rates below the
/// floor are flagged inconclusive.
NoiseSummary noise_summary(const CMat& g_hat, const OperatorBasis& basis, int n_qubits, double floor = 0.0);

/// Basis of G's eigenvectors, in which G itself is diagonal. `basis` is the basis G is
/// expressed in (Pauli when empty); the result is given in Pauli coefficients.
OperatorBasis sparsifying_basis(const CMat& g_hat, const OperatorBasis& basis = {});

}  // namespace lqt
