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
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/experiment.hpp"
#include "lqt/linear_problem.hpp"
#include "lqt/linearizer.hpp"

namespace lqt {

enum class Method { kFull, kDia, kPgdm, kCs };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct TraceRecord {
  int iteration = 0;
  double cost = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
  /// ||G_n - G_ref||_F and the same divided by ||G_ref||_F; NaN without a reference.
  double distance = std::numeric_limits<double>::quiet_NaN();
  double relative_distance = std::numeric_limits<double>::quiet_NaN();
  /// Pearson chi^2 of the current iterate; NaN unless tracked with finite shots.
  double chi2 = std::numeric_limits<double>::quiet_NaN();
  double elapsed_seconds = 0.0;
};

struct DescentTrace {
  std::vector<TraceRecord> records;

  /// Appends; throws if the iteration number does not increase.
  void push(const TraceRecord& r);
  bool empty() const noexcept { return records.empty(); }
  const TraceRecord& back() const { return records.back(); }
};

struct EstimationResult {
  Method method = Method::kDia;
  CMat g_hat;
  std::optional<RVec> c_hat;
  DescentTrace trace;
  bool converged = false;
  std::string stop_reason;
  int iterations = 0;
  double seconds = 0.0;
  /// Echo of the numeric options used.
  std::vector<std::pair<std::string, double>> options;
  /// CS only: final residual norm, its bound, and whether the bound holds.
  std::optional<double> residual_norm;
  std::optional<double> residual_bound;
  std::optional<bool> feasible;

  double seconds_per_iteration() const { return iterations > 0 ? seconds / iterations : 0.0; }
};

/// Options shared by every estimator.
struct CommonOptions {
  int max_iter = 5000;
  /// Reference G for the distance columns of the trace.
  std::optional<CMat> reference;
  /// Record every n-th iteration (the last one is always recorded).
  int trace_stride = 1;
  /// Track Pearson chi^2 in the trace (finite-shot data only).
  bool track_chi2 = false;
  /// Trace of the diagonal starting point, Tr{G_0} t_f.
  double initial_trace = 0.25;
  std::optional<CMat> initial_g;
};

// ---------------------------------------------------------------- full ML

struct FullMlOptions : CommonOptions {
  FullMlOptions() { max_iter = 3000; }
  /// Central-difference step (the default gradient).
  double fd_step = 1e-6;
  bool analytic_gradient = false;
  double grad_tol = 1e-9;
  /// Estimate the Hamiltonian coefficients together with G.
  bool estimate_hamiltonian = false;
  /// Hamiltonian Pauli coefficients (known value, or starting point when estimated).
  RVec c;
  OperatorBasis basis;  // Pauli when empty
};

/// Exact-propagation negative log-likelihood.
double cost_full(const RVec& c, const CMat& g, const FrequencyTensor& freq, const ExperimentDesign& design,
                 const OperatorBasis& basis);

/// Probabilities and cost of (c, L L^dag) with G given by a general factor, reusing
/// precomputed projector and state matrices. Used by the full-ML estimator.
class FullModelEvaluator {
 public:
  FullModelEvaluator(const ExperimentDesign& design, const OperatorBasis& basis);

  std::size_t k() const noexcept { return ops_.size(); }
  /// Probabilities over every design entry for H and factor L (G = L L^dag).
  ProbabilityTensor probabilities(const CMat& hamiltonian, const CMat& factor) const;
  double cost(const CMat& hamiltonian, const CMat& factor, const FrequencyTensor& freq) const;
  /// Cost with its exact gradient: dC = Re Tr{grad_factor^dag dL} + grad_c . dc.
  double cost_and_gradient(const CMat& hamiltonian, const CMat& factor, const FrequencyTensor& freq,
                           CMat& grad_factor, RVec* grad_c = nullptr) const;
  CMat hamiltonian(const RVec& c) const;

 private:
  ExperimentDesign design_;
  PauliBasis paulis_;
  std::vector<CMat> ops_;
  CMat states_;          // d^2 x n_states
  CMat projectors_adj_;  // n_proj x d^2
  CMat vec_ops_;         // d^2 x k, column p = vec(B_p)
  CMat vec_ops_conj_;    // d^2 x k, column p = vec(conj(B_p))

  CMat liouvillian(const CMat& hamiltonian, const CMat& factor) const;
};

EstimationResult full_ml_estimate(const FrequencyTensor& freq, const ExperimentDesign& design,
                                  const FullMlOptions& options);

// ---------------------------------------------------------------- linearized

/// -sum f log p over the linear model (all independent configurations, rest rows included).
double cost_linear(const CMat& g, const LinearizedModel& lin, const FrequencyTensor& freq);
/// R with dC = Tr{R dG}; R = -sum_k f_k Phi_k^T / p_k.
CMat gradient_R(const CMat& g, const LinearizedModel& lin, const FrequencyTensor& freq);

struct DiaOptions : CommonOptions {
  /// First line-search probe; the second is 2 eta'.
  double eta_prime = 0.3;
  double xi = 0.5;
  /// Stationarity threshold on ||R L||_F.
  double tol = 1e-10;
  /// Relative cost change that counts as converged (0 disables).
  double f_tol = 1e-14;
  /// Let eta' follow the line-search minimum (doubling or halving by at most 2x per iteration).
  bool adapt_eta = true;
};

struct PgdmOptions : CommonOptions {
  double gamma = 0.99;
  double eta = 3e-4;
  /// Stop when |cost_n - cost_{n-1}| <= tol.
  double tol = 1e-12;
  int divergence_window = 50;
  /// Zero the momentum whenever the cost increases.
  bool reset_on_increase = false;
};

struct CsOptions : CommonOptions {
  CsOptions() { max_iter = 20000; }
  /// Constraint ||f - p||_2 <= sqrt(n_conf) epsilon.
  double epsilon = 1e-3;
  /// ADMM penalty start value; rebalanced every 10 iterations.
  double rho = 1e3;
  /// Over-relaxation factor in (0, 2).
  double relaxation = 1.6;
  double abs_tol = 1e-13;
  double rel_tol = 1e-9;
  /// Relative slack on the residual bound when reporting feasibility.
  double feasibility_slack = 1e-2;
};

/// The linear estimators operate on a LinearProblem, which may cover a subset of configurations.
EstimationResult dia_estimate(const LinearProblem& problem, const DiaOptions& options);
EstimationResult pgdm_estimate(const LinearProblem& problem, const PgdmOptions& options);
EstimationResult cs_estimate(const LinearProblem& problem, const CsOptions& options);

EstimationResult dia_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const DiaOptions& options);
EstimationResult pgdm_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const PgdmOptions& options);
EstimationResult cs_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const CsOptions& options);

/// Eigendecomposition with negative eigenvalues set to zero; the result is exactly Hermitian.
CMat project_psd(const CMat& g);

/// `repeats` random nested sequences over `all`: sizes start, start + step, ... and finally all.size().
/// Repeat r draws its permutation from derive_seed(seed, r).
std::vector<std::vector<std::vector<std::size_t>>> grow_configuration_subsets(const std::vector<std::size_t>& all,
                                                                             std::size_t start, std::size_t step,
                                                                             std::size_t repeats,
                                                                             std::uint64_t seed);

}  // namespace lqt
