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

#include "lqt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "lqt/diagnostics.hpp"
#include "lqt/estimators.hpp"
#include "lqt/experiment.hpp"
#include "lqt/linear_problem.hpp"
#include "lqt/linearizer.hpp"

namespace lqt::bench {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct GateSetup {
  ExperimentDesign design;
  TargetUnitary target;
  RVec c;
  LinearizedModel lin;
};

RVec hamiltonian_coefficients(const TargetUnitary& target) {
  const PauliBasis paulis(target.n_qubits());
  const CVec full = paulis.decompose(target.hamiltonian);
  return full.tail(full.size() - 1).real();
}

GateSetup setup(const TargetUnitary& target, std::optional<std::uint64_t> shots) {
  const int n = target.n_qubits();
  ExperimentDesign design(n, {target.duration}, shots);
  const std::size_t k = design.dim() * design.dim() - 1;
  LinearizedModel lin = sensitivity_phi(target, design, OperatorBasis::pauli(k));
  return {design, target, hamiltonian_coefficients(target), std::move(lin)};
}

// Value of `field` at every iteration 0..len, holding the last recorded value.
template <typename F>
std::vector<double> curve(const EstimationResult& r, int len, F field) {
  std::vector<double> out(static_cast<std::size_t>(len) + 1, kNan);
  std::size_t pos = 0;
  double last = kNan;
  for (int it = 0; it <= len; ++it) {
    while (pos < r.trace.records.size() && r.trace.records[pos].iteration <= it) {
      last = field(r.trace.records[pos]);
      ++pos;
    }
    out[static_cast<std::size_t>(it)] = last;
  }
  return out;
}

double rel_dist(const TraceRecord& t) { return t.relative_distance; }

Series iteration_series(const std::string& name, const std::vector<std::vector<double>>& curves) {
  Series s;
  s.name = name;
  const std::size_t len = curves.empty() ? 0 : curves.front().size();
  s.x.resize(len);
  s.samples.assign(len, std::vector<double>(curves.size()));
  for (std::size_t i = 0; i < len; ++i) {
    s.x[i] = static_cast<double>(i);
    for (std::size_t r = 0; r < curves.size(); ++r) s.samples[i][r] = curves[r][i];
  }
  return s;
}

double median(const std::vector<double>& v) { return quantile(v, 0.5); }

double relative_error(const CMat& a, const CMat& b) { return frobenius_distance(a, b, true); }

std::vector<double> descending_eigenvalues(const CMat& g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g), Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.rbegin(), v.rend());
  return v;
}

// Rms misfit between the data and the linear model at the true G over the selected configurations.
double truth_misfit(const LinearProblem& problem, const CMat& g_true) {
  const RVec r = problem.residual(problem.packing().pack(g_true));
  return r.size() > 0 ? r.norm() / std::sqrt(static_cast<double>(r.size())) : 0.0;
}

std::vector<std::size_t> subset_sizes(const std::vector<std::vector<std::size_t>>& schedule) {
  std::vector<std::size_t> out;
  for (const auto& s : schedule) out.push_back(s.size());
  return out;
}

bool size_selected(std::size_t size, std::size_t total, const BenchOptions& options) {
  return size == total || !options.subset_limit || size <= *options.subset_limit;
}

}  // namespace

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double quantile(std::vector<double> values, double q) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
  if (values.empty()) return kNan;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const Series& BenchResult::get(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return s;
  }
  throw ValidationError("no series named " + name);
}

double BenchResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw ValidationError("no summary value named " + key);
}

std::vector<QuantileRow> BenchResult::rows() const {
  std::vector<QuantileRow> out;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out.push_back({s.name, s.x[i], quantile(s.samples[i], 0.2), quantile(s.samples[i], 0.5),
                     quantile(s.samples[i], 0.8)});
    }
  }
  return out;
}

std::string to_csv(const BenchResult& result) {
  std::ostringstream os;
  os.precision(10);
  os << "series," << result.x_name << ",percentile20,median,percentile80\n";
  for (const auto& r : result.rows()) {
    os << r.series << ',' << r.x << ',' << r.p20 << ',' << r.median << ',' << r.p80 << '\n';
  }
  return os.str();
}

StructuredRates figure4_rates() { return {0.002, 0.001, 0.003, 0.0015, 0.0005}; }
StructuredRates finite_shot_rates() { return {0.02, 0.01, 0.03, 0.015, 0.005}; }

BenchResult figure2(const BenchOptions& options) {
  const GateSetup s = setup(TargetUnitary::ms_half_pi(), std::nullopt);
  const int dia_iter = options.max_iter.value_or(2000);
  const int full_iter = options.max_iter.value_or(3000);
  const std::size_t n = options.repeats;
  std::vector<std::vector<double>> dia_curves(n), full_curves(n);
  std::vector<double> dia_spi(n), full_spi(n);

  parallel_for(n, options.jobs, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(options.seed, r));
    const CMat g = sample_hs_random_G(15, 0.25, rng);
    const FrequencyTensor freq = exact_frequencies(predicted_probabilities(LindbladModel(2, s.c, g), s.design), s.design);

    DiaOptions dia;
    dia.reference = g;
    dia.max_iter = dia_iter;
    dia.eta_prime = options.eta_prime;
    const EstimationResult rd = dia_estimate(s.lin, freq, dia);
    dia_curves[r] = curve(rd, dia_iter, rel_dist);
    dia_spi[r] = rd.seconds_per_iteration();

    FullMlOptions full;
    full.reference = g;
    full.c = s.c;
    full.max_iter = full_iter;
    full.analytic_gradient = !options.full_ml_fd_gradient;
    const EstimationResult rf = full_ml_estimate(freq, s.design, full);
    full_curves[r] = curve(rf, full_iter, rel_dist);
    full_spi[r] = rf.seconds_per_iteration();
  });

  BenchResult out;
  out.figure = 2;
  out.x_name = "iteration";
  out.metric = "relative_frobenius_error";
  out.series.push_back(iteration_series("dia", dia_curves));
  out.series.push_back(iteration_series("full", full_curves));
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"quadrature_steps", static_cast<double>(s.lin.quadrature_steps)},
                 {"dia_seconds_per_iteration", median(dia_spi)},
                 {"full_seconds_per_iteration", median(full_spi)},
                 {"full_analytic_gradient", options.full_ml_fd_gradient ? 0.0 : 1.0}};

  // Wall time of the finite-difference gradient path, from a short run on the first draw.
  if (!options.full_ml_fd_gradient && n > 0) {
    std::mt19937_64 rng(derive_seed(options.seed, 0));
    const CMat g = sample_hs_random_G(15, 0.25, rng);
    const FrequencyTensor freq = exact_frequencies(predicted_probabilities(LindbladModel(2, s.c, g), s.design), s.design);
    FullMlOptions full;
    full.c = s.c;
    full.max_iter = 3;
    const EstimationResult rf = full_ml_estimate(freq, s.design, full);
    out.summary.emplace_back("full_fd_seconds_per_iteration", rf.seconds_per_iteration());
  } else {
    out.summary.emplace_back("full_fd_seconds_per_iteration", median(full_spi));
  }
  return out;
}

BenchResult figure3(const BenchOptions& options) {
  const GateSetup s = setup(TargetUnitary::ms_half_pi(), std::nullopt);
  const int max_iter = options.max_iter.value_or(5000);
  const std::size_t n = options.repeats;
  constexpr double kTrace = 0.01;
  std::vector<std::vector<double>> hs_dia(n), hs_pgdm(n), r1_dia(n), r1_pgdm(n);

  parallel_for(2 * n, options.jobs, [&](std::size_t task) {
    const bool rank1 = task >= n;
    const std::size_t r = task % n;
    std::mt19937_64 rng(derive_seed(options.seed, task));
    const CMat g = rank1 ? sample_projector_G(15, 1, kTrace, rng) : sample_hs_random_G(15, kTrace, rng);
    const FrequencyTensor freq = exact_frequencies(predicted_probabilities(LindbladModel(2, s.c, g), s.design), s.design);
    const LinearProblem problem(s.lin, freq);

    DiaOptions dia;
    dia.reference = g;
    dia.max_iter = max_iter;
    dia.initial_trace = kTrace;
    dia.eta_prime = options.eta_prime;
    PgdmOptions pgdm;
    pgdm.reference = g;
    pgdm.max_iter = max_iter;
    pgdm.initial_trace = kTrace;
    pgdm.eta = options.eta.value_or(3e-4);
    pgdm.gamma = options.gamma.value_or(0.99);
    pgdm.tol = options.tol.value_or(0.0);
    (rank1 ? r1_dia : hs_dia)[r] = curve(dia_estimate(problem, dia), max_iter, rel_dist);
    (rank1 ? r1_pgdm : hs_pgdm)[r] = curve(pgdm_estimate(problem, pgdm), max_iter, rel_dist);
  });

  BenchResult out;
  out.figure = 3;
  out.x_name = "iteration";
  out.metric = "relative_frobenius_error";
  out.series.push_back(iteration_series("hs_dia", hs_dia));
  out.series.push_back(iteration_series("hs_pgdm", hs_pgdm));
  out.series.push_back(iteration_series("rank1_dia", r1_dia));
  out.series.push_back(iteration_series("rank1_pgdm", r1_pgdm));
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"pgdm_eta", options.eta.value_or(3e-4)},
                 {"pgdm_gamma", options.gamma.value_or(0.99)}};
  return out;
}

BenchResult figure4(const BenchOptions& options) {
  const ExperimentDesign design(2, {1.0}, std::nullopt);
  const LinearizedModel lin = sensitivity_phi(TargetUnitary::identity(2), design, OperatorBasis::pauli(15));
  const LindbladModel model = structured_noise_G(figure4_rates());
  const CMat& g = model.g();
  const ProbabilityTensor exact = predicted_probabilities(model, design);
  const FrequencyTensor freq = exact_frequencies(exact, design);
  const RVec p_lin = linear_probability(lin, g);
  const std::vector<std::size_t> all = design.independent_entries();

  double max_dev = 0.0;
  double sq = 0.0;
  for (std::size_t e : all) {
    const double dev = p_lin[static_cast<Eigen::Index>(e)] - exact[e];
    max_dev = std::max(max_dev, std::abs(dev));
    sq += dev * dev;
  }
  const double rms = std::sqrt(sq / static_cast<double>(all.size()));
  const double epsilon = options.epsilon.value_or(options.epsilon_scale * rms);

  const auto schedules =
      grow_configuration_subsets(all, options.subset_start, options.subset_step, options.repeats, options.seed);
  const std::vector<std::size_t> sizes = subset_sizes(schedules.front());
  const std::size_t n_sizes = sizes.size();
  const std::size_t n = options.repeats;

  CsOptions cs;
  cs.epsilon = epsilon;
  if (options.max_iter) cs.max_iter = *options.max_iter;
  DiaOptions dia;
  dia.initial_trace = g.trace().real();
  dia.eta_prime = options.eta_prime;
  if (options.max_iter) dia.max_iter = *options.max_iter;

  // The complete set is the same for every schedule; solve it once.
  const LinearProblem full_problem(lin, freq);
  const EstimationResult cs_full = cs_estimate(full_problem, cs);
  const EstimationResult dia_full = dia_estimate(full_problem, dia);

  std::vector<std::vector<double>> e_cs(n_sizes, std::vector<double>(n, kNan));
  std::vector<std::vector<double>> e_dia = e_cs;
  parallel_for(n * n_sizes, options.jobs, [&](std::size_t task) {
    const std::size_t r = task / n_sizes;
    const std::size_t j = task % n_sizes;
    const std::size_t size = schedules[r][j].size();
    if (size == all.size()) {
      e_cs[j][r] = relative_error(cs_full.g_hat, g);
      e_dia[j][r] = relative_error(dia_full.g_hat, g);
      return;
    }
    if (!size_selected(size, all.size(), options)) return;
    const LinearProblem problem(lin, freq, schedules[r][j]);
    e_cs[j][r] = relative_error(cs_estimate(problem, cs).g_hat, g);
    e_dia[j][r] = relative_error(dia_estimate(problem, dia).g_hat, g);
  });

  const RVec p_cs = linear_probability(lin, cs_full.g_hat);
  const RVec p_dia = linear_probability(lin, dia_full.g_hat);
  double gap = 0.0;
  for (std::size_t e : all) {
    gap = std::max(gap, std::abs(p_cs[static_cast<Eigen::Index>(e)] - p_dia[static_cast<Eigen::Index>(e)]));
  }

  BenchResult out;
  out.figure = 4;
  out.x_name = "n_conf";
  out.metric = "relative_frobenius_error";
  for (const char* name : {"cs", "dia"}) {
    Series s;
    s.name = name;
    for (std::size_t j = 0; j < n_sizes; ++j) {
      if (!size_selected(sizes[j], all.size(), options)) continue;
      s.x.push_back(static_cast<double>(sizes[j]));
      s.samples.push_back(std::string(name) == "cs" ? e_cs[j] : e_dia[j]);
    }
    out.series.push_back(std::move(s));
  }
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"epsilon", epsilon},
                 {"linearization_max_deviation", max_dev},
                 {"linearization_rms_deviation", rms},
                 {"full_set_cs_error", relative_error(cs_full.g_hat, g)},
                 {"full_set_dia_error", relative_error(dia_full.g_hat, g)},
                 {"full_set_cs_dia_distance", relative_error(cs_full.g_hat, dia_full.g_hat)},
                 {"full_set_probability_gap", gap},
                 {"full_set_cs_feasible", cs_full.feasible.value_or(false) ? 1.0 : 0.0}};
  return out;
}

BenchResult figure5(const BenchOptions& options) {
  const std::uint64_t shots = options.shots_per_setting.value_or(10000);
  const GateSetup s = setup(TargetUnitary::rx_half_pi(), shots);
  const int max_iter = options.max_iter.value_or(200);
  const double gamma_true = 5e-3;
  CVec axis(3);
  axis << 0.8, 0.3, 0.5;
  axis.normalize();
  const CMat g_true = gamma_true * axis * axis.adjoint();
  const ProbabilityTensor p = predicted_probabilities(LindbladModel(1, s.c, g_true), s.design);
  const std::size_t n = options.repeats;
  std::vector<std::vector<double>> chi2(n);
  std::vector<double> gamma_max(n), overlap(n);

  parallel_for(n, options.jobs, [&](std::size_t r) {
    const FrequencyTensor freq = frequencies(sample_counts(p, s.design, shots, derive_seed(options.seed, r)));
    DiaOptions dia;
    dia.max_iter = max_iter;
    dia.track_chi2 = true;
    dia.eta_prime = options.eta_prime;
    const EstimationResult est = dia_estimate(s.lin, freq, dia);
    chi2[r] = curve(est, max_iter, [](const TraceRecord& t) { return t.chi2; });
    const NoiseSummary summary = noise_summary(est.g_hat, OperatorBasis::pauli(3), 1);
    gamma_max[r] = summary.jumps.front().rate;
    overlap[r] = std::abs(summary.jumps.front().pauli_vector.dot(axis));
  });

  ShotNoiseOptions sn;
  sn.repeats = n;
  sn.seed = derive_seed(options.seed, 1000003);
  const ShotNoiseFloor floor = shot_noise_floor(s.lin, shots, sn);

  BenchResult out;
  out.figure = 5;
  out.x_name = "iteration";
  out.metric = "chi2";
  out.series.push_back(iteration_series("dia", chi2));
  std::vector<double> final_chi2;
  for (const auto& c : chi2) final_chi2.push_back(c.back());
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"shots_per_setting", static_cast<double>(shots)},
                 {"gamma_true", gamma_true},
                 {"gamma_max_median", median(gamma_max)},
                 {"axis_overlap_median", median(overlap)},
                 {"final_chi2_median", median(final_chi2)},
                 {"shot_noise_floor", floor.median}};
  return out;
}

BenchResult figure6(const BenchOptions& options) {
  const std::uint64_t shots = options.shots_per_setting.value_or(1000);
  const GateSetup s = setup(TargetUnitary::ms_half_pi(), shots);
  const LindbladModel truth(2, s.c, structured_noise_G(finite_shot_rates()).g());
  const ProbabilityTensor p = predicted_probabilities(truth, s.design);
  const std::vector<std::size_t> all = s.design.independent_entries();
  const std::size_t n_conf = std::min<std::size_t>(96, all.size());
  const std::size_t n = options.repeats;
  std::vector<std::vector<double>> dia_rates(n), cs_rates(n);

  parallel_for(n, options.jobs, [&](std::size_t r) {
    const FrequencyTensor freq = frequencies(sample_counts(p, s.design, shots, derive_seed(options.seed, r)));
    const auto subset = grow_configuration_subsets(all, n_conf, all.size(), 1, derive_seed(options.seed, n + r));
    const LinearProblem problem(s.lin, freq, subset.front().front());
    DiaOptions dia;
    dia.eta_prime = options.eta_prime;
    if (options.max_iter) dia.max_iter = *options.max_iter;
    CsOptions cs;
    cs.epsilon = options.epsilon.value_or(options.epsilon_scale * truth_misfit(problem, truth.g()));
    if (options.max_iter) cs.max_iter = *options.max_iter;
    dia_rates[r] = descending_eigenvalues(dia_estimate(problem, dia).g_hat);
    cs_rates[r] = descending_eigenvalues(cs_estimate(problem, cs).g_hat);
  });

  ShotNoiseOptions sn;
  sn.repeats = n;
  sn.seed = derive_seed(options.seed, 1000003);
  const ShotNoiseFloor floor = shot_noise_floor(s.lin, shots, sn);

  auto spectrum = [&](const std::string& name, const std::vector<std::vector<double>>& rates) {
    Series out;
    out.name = name;
    for (std::size_t i = 0; i < 15; ++i) {
      out.x.push_back(static_cast<double>(i + 1));
      std::vector<double> col;
      for (const auto& v : rates) col.push_back(v[i]);
      out.samples.push_back(col);
    }
    return out;
  };
  BenchResult out;
  out.figure = 6;
  out.x_name = "rank";
  out.metric = "decay_rate";
  out.series.push_back(spectrum("dia", dia_rates));
  out.series.push_back(spectrum("cs", cs_rates));
  out.series.push_back(spectrum("true", std::vector<std::vector<double>>(1, descending_eigenvalues(truth.g()))));
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"shots_per_setting", static_cast<double>(shots)},
                 {"n_conf", static_cast<double>(n_conf)},
                 {"shot_noise_floor", floor.median}};
  return out;
}

BenchResult figure7(const BenchOptions& options) {
  const std::uint64_t shots = options.shots_per_setting.value_or(1000);
  const GateSetup s = setup(TargetUnitary::ms_half_pi(), shots);
  const LindbladModel truth(2, s.c, structured_noise_G(finite_shot_rates()).g());
  const ProbabilityTensor p = predicted_probabilities(truth, s.design);
  const FrequencyTensor freq = frequencies(sample_counts(p, s.design, shots, options.seed));

  // Reference: full ML on every configuration; its eigenbasis is the sparsifying basis.
  FullMlOptions full;
  full.c = s.c;
  full.max_iter = options.max_iter.value_or(3000);
  full.analytic_gradient = !options.full_ml_fd_gradient;
  const CMat g_ref = full_ml_estimate(freq, s.design, full).g_hat;
  const OperatorBasis sparse = sparsifying_basis(g_ref);
  const LinearizedModel lin_sparse = sensitivity_phi(s.target, s.design, sparse);

  const std::vector<std::size_t> all = s.design.independent_entries();
  const auto schedules =
      grow_configuration_subsets(all, options.subset_start, options.subset_step, options.repeats, options.seed);
  const std::vector<std::size_t> sizes = subset_sizes(schedules.front());
  const std::size_t n_sizes = sizes.size();
  const std::size_t n = options.repeats;
  std::vector<std::vector<double>> e_dia(n_sizes, std::vector<double>(n, kNan));
  std::vector<std::vector<double>> e_cs = e_dia;
  std::vector<std::vector<double>> e_sparse = e_dia;

  parallel_for(n * n_sizes, options.jobs, [&](std::size_t task) {
    const std::size_t r = task / n_sizes;
    const std::size_t j = task % n_sizes;
    const auto& subset = schedules[r][j];
    if (!size_selected(subset.size(), all.size(), options)) return;
    DiaOptions dia;
    dia.eta_prime = options.eta_prime;
    const LinearProblem problem(s.lin, freq, subset);
    const LinearProblem problem_sparse(lin_sparse, freq, subset);
    CsOptions cs;
    cs.epsilon = options.epsilon.value_or(options.epsilon_scale * truth_misfit(problem, truth.g()));
    e_dia[j][r] = relative_error(dia_estimate(problem, dia).g_hat, g_ref);
    e_cs[j][r] = relative_error(cs_estimate(problem, cs).g_hat, g_ref);
    e_sparse[j][r] = relative_error(to_pauli_matrix(cs_estimate(problem_sparse, cs).g_hat, sparse), g_ref);
  });

  BenchResult out;
  out.figure = 7;
  out.x_name = "n_conf";
  out.metric = "relative_frobenius_distance_to_full_ml";
  const std::vector<std::pair<const char*, const std::vector<std::vector<double>>*>> named = {
      {"dia", &e_dia}, {"cs", &e_cs}, {"cs_sparse", &e_sparse}};
  for (const auto& [name, values] : named) {
    Series ser;
    ser.name = name;
    for (std::size_t j = 0; j < n_sizes; ++j) {
      if (!size_selected(sizes[j], all.size(), options)) continue;
      ser.x.push_back(static_cast<double>(sizes[j]));
      ser.samples.push_back((*values)[j]);
    }
    out.series.push_back(std::move(ser));
  }
  out.summary = {{"repeats", static_cast<double>(n)},
                 {"shots_per_setting", static_cast<double>(shots)},
                 {"reference_trace", g_ref.trace().real()}};
  return out;
}

BenchResult run_figure(int figure, const BenchOptions& options) {
  switch (figure) {
    case 2: return figure2(options);
    case 3: return figure3(options);
    case 4: return figure4(options);
    case 5: return figure5(options);
    case 6: return figure6(options);
    case 7: return figure7(options);
    default: throw ValidationError("figure must be one of 2, 3, 4, 5, 6, 7");
  }
}

}  // namespace lqt::bench
