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

#include "lqt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqt/estimators.hpp"
#include "lqt/linear_problem.hpp"

namespace lqt {

ChiSquareReport pearson_chi2_rows(const RVec& p, const RVec& f, const std::vector<double>& shots,
                                  const std::vector<std::size_t>& group) {
  if (p.size() != f.size() || shots.size() != static_cast<std::size_t>(p.size()) || group.size() != shots.size()) {
    throw ValidationError("chi^2 inputs have mismatched sizes");
  }
  ChiSquareReport rep;
  rep.min_expected_count = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t i = 0;
  const auto n = static_cast<std::size_t>(p.size());
  while (i < n) {
    std::size_t j = i;
    while (j < n && group[j] == group[i]) ++j;
    const double shots_g = shots[i];
    ++rep.n_groups;
    rep.dof += static_cast<double>(j - i) - 1.0;
    for (std::size_t r = i; r < j; ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const double diff = p[ri] - f[ri];
      ++rep.n_terms;
      rep.min_expected_count = std::min(rep.min_expected_count, shots_g * p[ri]);
      if (diff == 0.0) continue;
      if (p[ri] <= 0.0 || !std::isfinite(shots_g)) {
        rep.capped = true;
        continue;
      }
      sum += shots_g * diff * diff / p[ri];
    }
    i = j;
  }
  if (rep.n_terms == 0) rep.min_expected_count = 0.0;
  rep.chi2 = rep.capped ? kChi2Cap : (rep.dof > 0.0 ? sum / rep.dof : 0.0);
  rep.sigma = rep.dof > 0.0 ? std::sqrt(2.0 / rep.dof) : 0.0;
  rep.valid = !rep.capped && rep.min_expected_count >= 5.0;
  return rep;
}

ChiSquareReport pearson_chi2(const ProbabilityTensor& probabilities, const FrequencyTensor& freq,
                             const ExperimentDesign& design, bool include_dependent) {
  if (probabilities.size() != design.n_entries() || freq.values.size() != design.n_entries()) {
    throw ValidationError("probabilities and frequencies must cover the design");
  }
  const std::size_t d = design.dim();
  std::vector<double> p, f, shots;
  std::vector<std::size_t> group;
  for (std::size_t g = 0; g < design.n_groups(); ++g) {
    if (!freq.present(g)) continue;
    for (std::size_t m = 0; m < d; ++m) {
      if (!include_dependent && m == d - 1) continue;
      p.push_back(probabilities[g * d + m]);
      f.push_back(freq.values[g * d + m]);
      shots.push_back(freq.group_shots[g]);
      group.push_back(g);
    }
  }
  ChiSquareReport rep = pearson_chi2_rows(Eigen::Map<const RVec>(p.data(), static_cast<Eigen::Index>(p.size())),
                                          Eigen::Map<const RVec>(f.data(), static_cast<Eigen::Index>(f.size())),
                                          shots, group);
  if (!include_dependent && rep.dof > 0.0) {
    // Each group contributed d - 1 terms; the reduction stays d - 1 per group.
    rep.chi2 = rep.capped ? kChi2Cap : rep.chi2 * rep.dof / (static_cast<double>(rep.n_groups) * (d - 1.0));
    rep.dof = static_cast<double>(rep.n_groups) * (d - 1.0);
    rep.sigma = std::sqrt(2.0 / rep.dof);
  }
  return rep;
}

ChiSquareReport pearson_chi2(const LindbladModel& model, const FrequencyTensor& freq, const ExperimentDesign& design) {
  return pearson_chi2(predicted_probabilities(model, design), freq, design);
}

ChiSquareReport pearson_chi2(const LinearizedModel& lin, const CMat& g, const FrequencyTensor& freq) {
  const RVec p = linear_probability(lin, g);
  return pearson_chi2(ProbabilityTensor(p.data(), p.data() + p.size()), freq, lin.design);
}

double frobenius_distance(const CMat& a, const CMat& b, bool normalized) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrices must have equal shapes");
  const double dist = (a - b).norm();
  if (!normalized) return dist;
  const double nb = b.norm();
  if (nb == 0.0) throw ValidationError("cannot normalize by a zero matrix");
  return dist / nb;
}

ShotNoiseFloor shot_noise_floor(const LinearizedModel& lin, std::optional<std::uint64_t> shots_per_setting,
                                const ShotNoiseOptions& options) {
  ShotNoiseFloor out;
  const ExperimentDesign& design = lin.design;
  ProbabilityTensor pu(lin.p_u.data(), lin.p_u.data() + lin.p_u.size());
  for (double& v : pu) v = std::clamp(v, 0.0, 1.0);
  DiaOptions dia;
  dia.max_iter = options.max_iter;
  dia.eta_prime = options.eta_prime;
  const std::size_t repeats = shots_per_setting ? options.repeats : 1;
  for (std::size_t r = 0; r < repeats; ++r) {
    FrequencyTensor freq;
    if (shots_per_setting) {
      freq = frequencies(sample_counts(pu, design, *shots_per_setting, derive_seed(options.seed, r)));
    } else {
      freq = exact_frequencies(pu, design);
    }
    const EstimationResult est = dia_estimate(lin, freq, dia);
    Eigen::SelfAdjointEigenSolver<CMat> es(est.g_hat, Eigen::EigenvaluesOnly);
    out.values.push_back(std::max(es.eigenvalues().maxCoeff(), 0.0));
  }
  std::vector<double> sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return out;
}

NoiseSummary noise_summary(const CMat& g_hat, const OperatorBasis& basis, int n_qubits, double floor) {
  const PauliBasis paulis(n_qubits);
  const std::size_t k = paulis.size() - 1;
  const OperatorBasis b = basis.coeffs.size() == 0 ? OperatorBasis::pauli(k) : basis;
  if (static_cast<std::size_t>(g_hat.rows()) != k || b.size() != k) {
    throw ValidationError("G and basis must have size d^2 - 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g_hat));
  NoiseSummary out;
  out.shot_noise_floor = floor;
  std::vector<std::string> labels;
  for (std::size_t a = 1; a <= k; ++a) labels.push_back(paulis.label(a));
  for (Eigen::Index j = es.eigenvalues().size() - 1; j >= 0; --j) {
    JumpSummary js;
    js.rate = std::max(es.eigenvalues()[j], 0.0);
    // L = sum_p v_p B_p = sum_alpha (b^T v)_alpha E_alpha
    CVec coeffs = b.coeffs.transpose() * es.eigenvectors().col(j);
    const double norm = coeffs.norm();
    if (norm > 0.0) coeffs /= norm;
    js.rate *= norm * norm;  // unit-norm jump in Pauli coordinates
    // Fix the global phase so the largest component is real and positive.
    Eigen::Index imax = 0;
    coeffs.cwiseAbs().maxCoeff(&imax);
    if (std::abs(coeffs[imax]) > 0.0) coeffs *= std::conj(coeffs[imax]) / std::abs(coeffs[imax]);
    js.pauli_vector = coeffs;
    js.labels = labels;
    js.inconclusive = js.rate < floor;
    out.jumps.push_back(std::move(js));
  }
  return out;
}

OperatorBasis sparsifying_basis(const CMat& g_hat, const OperatorBasis& basis) {
  const auto k = static_cast<std::size_t>(g_hat.rows());
  const OperatorBasis b = basis.coeffs.size() == 0 ? OperatorBasis::pauli(k) : basis;
  if (b.size() != k) throw ValidationError("G and basis sizes differ");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g_hat));
  // Descending rates; row p of the new coefficients is u_p^T expressed in Pauli coordinates.
  CMat u = es.eigenvectors().rowwise().reverse();
  OperatorBasis out;
  out.coeffs = u.transpose() * b.coeffs;
  return out;
}

}  // namespace lqt
