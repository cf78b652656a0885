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

// lqt: simulate, linearize, estimate, diagnose and benchmark Lindbladian tomography.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqt/bench.hpp"
#include "lqt/diagnostics.hpp"
#include "lqt/estimators.hpp"
#include "lqt/linear_problem.hpp"
#include "lqt/linearizer.hpp"
#include "lqt/serialization.hpp"

#ifndef LQT_VERSION
#define LQT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace lqt;

namespace {

struct Config {
  // shared
  std::optional<std::uint64_t> seed;
  std::string shots = "inf";
  std::string out = ".";
  unsigned jobs = 1;
  std::string basis = "pauli";
  std::string basis_file;
  // simulate
  std::string model_file;
  std::vector<double> rates;
  std::string target = "";
  std::vector<double> times{1.0};
  std::string name = "counts";
  // estimate / diagnose
  std::string counts_file;
  std::string result_file;
  std::string linear_file;
  std::string reference_file;
  std::string method = "dia";
  std::optional<double> epsilon;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<int> max_iter;
  std::optional<double> tol;
  std::optional<std::size_t> subset_size;
  bool estimate_hamiltonian = false;
  bool fd_gradient = false;
  double initial_trace = 0.01;
  std::size_t floor_repeats = 0;
  // bench
  int figure = 0;
  std::size_t repeats = 20;
  std::size_t subset_start = 33;
  std::size_t subset_step = 21;
  std::optional<std::size_t> subset_limit;
  bool paper_scale = false;
};

std::optional<std::uint64_t> parse_shots(const std::string& s) {
  if (s == "inf") return std::nullopt;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v == 0) throw ValidationError("--shots-per-setting must be a positive integer or 'inf'");
  return v;
}

// Canonical argument text for the config hash: output location and thread count are dropped
// and input files enter by content, so identical inputs hash equally wherever they live.
std::string canonical_args(int argc, char** argv) {
  static const std::vector<std::string> volatile_flags{"--out", "--jobs"};
  static const std::vector<std::string> file_flags{"--model", "--counts", "--result", "--linear-model", "--reference",
                                                   "--basis-file"};
  auto is = [](const std::vector<std::string>& set, const std::string& a) {
    return std::find(set.begin(), set.end(), a) != set.end();
  };
  std::string out;
  for (int i = 1; i < argc; ++i) {
    std::string flag = argv[i];
    std::optional<std::string> value;
    const auto eq = flag.find('=');
    if (flag.rfind("--", 0) == 0 && eq != std::string::npos) {
      value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
    } else if ((is(volatile_flags, flag) || is(file_flags, flag)) && i + 1 < argc) {
      value = argv[++i];
    }
    if (is(volatile_flags, flag)) continue;
    std::string piece = flag;
    if (value) {
      if (is(file_flags, flag) && fs::exists(*value)) {
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a(read_text(*value))));
        piece += "=@" + std::string(hex);
      } else {
        piece += "=" + *value;
      }
    }
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

Provenance provenance(const Config& cfg, const std::string& command, const std::string& canonical_args) {
  Provenance p;
  p.tool_version = LQT_VERSION;
  p.has_seed = cfg.seed.has_value();
  p.seed = cfg.seed.value_or(0);
  p.config_hash = fnv1a(canonical_args);
  p.command = command;
  return p;
}

std::uint64_t require_seed(const Config& cfg, const std::string& command) {
  if (!cfg.seed) throw ValidationError(command + " is stochastic and needs --seed");
  return *cfg.seed;
}

OperatorBasis load_basis(const Config& cfg, std::size_t k) {
  if (cfg.basis == "pauli") return OperatorBasis::pauli(k);
  if (cfg.basis_file.empty()) throw ValidationError("--basis file needs --basis-file");
  const nlohmann::json j = nlohmann::json::parse(read_text(cfg.basis_file));
  OperatorBasis b{complex_matrix_from_json(j.contains("coeffs") ? j.at("coeffs") : j)};
  if (b.size() != k) throw ValidationError("basis file has " + std::to_string(b.size()) + " rows, expected " + std::to_string(k));
  b.validate();
  return b;
}

TargetUnitary load_target(const std::string& name, int n_qubits) {
  if (!name.empty()) return TargetUnitary::named(name, n_qubits);
  return n_qubits == 1 ? TargetUnitary::rx_half_pi() : TargetUnitary::ms_half_pi();
}

RVec target_coefficients(const TargetUnitary& target) {
  const PauliBasis pb(target.n_qubits());
  const std::size_t k = pb.size() - 1;
  return pb.decompose(target.hamiltonian).tail(static_cast<Eigen::Index>(k)).real();
}

ordered_json design_json(const ExperimentDesign& d) {
  ordered_json j;
  j["n_qubits"] = d.n_qubits();
  j["times"] = d.times();
  if (d.shots_per_setting()) {
    j["N_sc"] = *d.shots_per_setting();
  } else {
    j["N_sc"] = nullptr;
  }
  return j;
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

// ------------------------------------------------------------------ simulate

int run_simulate(const Config& cfg, const Provenance& prov) {
  std::optional<LindbladModel> model;
  if (!cfg.model_file.empty()) {
    model = read_model(cfg.model_file);
  } else if (cfg.rates.size() == 5) {
    const LindbladModel noise = structured_noise_G({cfg.rates[0], cfg.rates[1], cfg.rates[2], cfg.rates[3], cfg.rates[4]});
    const RVec c = cfg.target.empty() ? RVec::Zero(15) : target_coefficients(TargetUnitary::named(cfg.target, 2));
    model.emplace(2, c, noise.g());
  } else {
    throw ValidationError("simulate needs --model or --structured-rates with five values");
  }
  const std::optional<std::uint64_t> shots = parse_shots(cfg.shots);
  const ExperimentDesign design(model->n_qubits(), cfg.times, shots);
  const ProbabilityTensor p = predicted_probabilities(*model, design);
  ordered_json meta;
  meta["provenance"] = provenance_to_json(prov);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const fs::path csv = dir / (cfg.name + ".csv");
  if (shots) {
    const CountsTable counts = sample_counts(p, design, *shots, require_seed(cfg, "simulate"));
    write_counts(counts, csv, meta.dump());
  } else {
    write_probabilities(p, design, csv, meta.dump());
  }
  std::cout << csv.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ linearize

int run_linearize(const Config& cfg, const Provenance& prov, int n_qubits) {
  const TargetUnitary target = load_target(cfg.target, n_qubits);
  const ExperimentDesign design(target.n_qubits(), cfg.times, parse_shots(cfg.shots));
  const std::size_t k = design.dim() * design.dim() - 1;
  const LinearizedModel lin = sensitivity_phi(target, design, load_basis(cfg, k));
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const fs::path bin = dir / "linear_model.bin";
  write_linear_model(lin, bin);
  ordered_json j;
  j["provenance"] = provenance_to_json(prov);
  j["target"] = lin.target_name;
  j["design"] = design_json(design);
  j["quadrature_steps"] = lin.quadrature_steps;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(lin.hash));
  j["hash"] = hash;
  j["file"] = bin.filename().string();
  write_json(dir / "linear_model.json", j);
  std::cout << bin.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ estimate

LinearizedModel linear_model_for(const Config& cfg, const TargetUnitary& target, const ExperimentDesign& design) {
  const std::size_t k = design.dim() * design.dim() - 1;
  if (!cfg.linear_file.empty()) {
    LinearizedModel lin = read_linear_model(cfg.linear_file);
    if (lin.design.n_qubits() != design.n_qubits() || lin.design.times() != design.times()) {
      throw ValidationError("linear model design does not match the counts file");
    }
    lin.design = design;
    return lin;
  }
  return sensitivity_phi(target, design, load_basis(cfg, k));
}

template <typename Options>
void apply_common(const Config& cfg, Options& o) {
  if (cfg.max_iter) o.max_iter = *cfg.max_iter;
  o.initial_trace = cfg.initial_trace;
}

int run_estimate(const Config& cfg, const Provenance& prov) {
  if (cfg.counts_file.empty()) throw ValidationError("estimate needs --counts");
  const auto [design, freq] = read_frequency_file(cfg.counts_file);
  const TargetUnitary target = load_target(cfg.target, design.n_qubits());
  const Method method = parse_method(cfg.method);
  const std::size_t k = design.dim() * design.dim() - 1;
  const bool track = !freq.infinite_shots();

  EstimationResult result;
  ordered_json context;
  context["target"] = target.name();
  context["design"] = design_json(design);
  context["basis"] = cfg.basis;
  if (method == Method::kFull) {
    FullMlOptions o;
    apply_common(cfg, o);
    o.c = target_coefficients(target);
    o.basis = load_basis(cfg, k);
    o.analytic_gradient = !cfg.fd_gradient;
    o.estimate_hamiltonian = cfg.estimate_hamiltonian;
    o.track_chi2 = track;
    if (cfg.tol) o.grad_tol = *cfg.tol;
    result = full_ml_estimate(freq, design, o);
    context["basis_coeffs"] = complex_matrix_to_json(o.basis.coeffs);
  } else {
    const LinearizedModel lin = linear_model_for(cfg, target, design);
    std::optional<std::vector<std::size_t>> selection;
    if (cfg.subset_size) {
      std::vector<std::size_t> all = design.independent_entries();
      if (*cfg.subset_size == 0 || *cfg.subset_size > all.size()) throw ValidationError("--subset-size out of range");
      const auto schedule = grow_configuration_subsets(all, *cfg.subset_size, all.size(), 1, require_seed(cfg, "estimate --subset-size"));
      selection = schedule[0][0];
      context["configurations"] = *selection;
    }
    const LinearProblem problem(lin, freq, selection);
    if (method == Method::kDia) {
      DiaOptions o;
      apply_common(cfg, o);
      o.track_chi2 = track;
      if (cfg.eta) o.eta_prime = *cfg.eta;
      if (cfg.tol) o.tol = *cfg.tol;
      result = dia_estimate(problem, o);
    } else if (method == Method::kPgdm) {
      PgdmOptions o;
      apply_common(cfg, o);
      o.track_chi2 = track;
      if (cfg.eta) o.eta = *cfg.eta;
      if (cfg.gamma) o.gamma = *cfg.gamma;
      if (cfg.tol) o.tol = *cfg.tol;
      result = pgdm_estimate(problem, o);
    } else {
      CsOptions o;
      apply_common(cfg, o);
      o.track_chi2 = track;
      if (cfg.epsilon) {
        o.epsilon = *cfg.epsilon;
      } else if (track) {
        // One standard deviation of a frequency at p = 1/2.
        o.epsilon = 0.5 / std::sqrt(static_cast<double>(*design.shots_per_setting()));
      } else {
        throw ValidationError("cs on exact probabilities needs an explicit --epsilon");
      }
      result = cs_estimate(problem, o);
    }
    context["basis_coeffs"] = complex_matrix_to_json(lin.basis.coeffs);
  }
  if (result.c_hat) {
    context["c"] = nullptr;
  } else {
    const RVec c = target_coefficients(target);
    context["c"] = std::vector<double>(c.data(), c.data() + c.size());
  }
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const fs::path path = dir / "result.json";
  write_json(path, result_to_json(result, prov, context));
  write_json(timing_sidecar_path(path), timing_to_json(result));
  std::cout << path.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ diagnose

int run_diagnose(const Config& cfg, const Provenance& prov) {
  if (cfg.result_file.empty() || cfg.counts_file.empty()) throw ValidationError("diagnose needs --result and --counts");
  const nlohmann::json doc = nlohmann::json::parse(read_text(cfg.result_file));
  const EstimationResult est = result_from_json(doc);
  const auto [design, freq] = read_frequency_file(cfg.counts_file);
  const std::size_t k = design.dim() * design.dim() - 1;
  if (static_cast<std::size_t>(est.g_hat.rows()) != k) throw ValidationError("result and counts file sizes differ");
  const std::string target_name = doc.value("target", std::string());
  const TargetUnitary target = load_target(target_name == "custom" ? std::string() : target_name, design.n_qubits());
  OperatorBasis basis = OperatorBasis::pauli(k);
  if (doc.contains("basis_coeffs")) basis.coeffs = complex_matrix_from_json(doc.at("basis_coeffs"));

  ChiSquareReport chi2;
  if (est.method == Method::kFull) {
    RVec c = est.c_hat ? *est.c_hat : target_coefficients(target);
    if (!est.c_hat && doc.contains("c") && doc.at("c").is_array()) {
      const auto v = doc.at("c").get<std::vector<double>>();
      c = Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    chi2 = pearson_chi2(LindbladModel(design.n_qubits(), c, est.g_hat, basis), freq, design);
  } else {
    const LinearizedModel lin = cfg.linear_file.empty() ? sensitivity_phi(target, design, basis) : linear_model_for(cfg, target, design);
    chi2 = pearson_chi2(lin, est.g_hat, freq);
  }

  double floor = 0.0;
  ordered_json floor_json = nullptr;
  if (cfg.floor_repeats > 0) {
    const LinearizedModel lin = sensitivity_phi(target, design, basis);
    ShotNoiseOptions so;
    so.repeats = cfg.floor_repeats;
    so.seed = require_seed(cfg, "diagnose --shot-noise-repeats");
    const ShotNoiseFloor f = shot_noise_floor(lin, design.shots_per_setting(), so);
    floor = f.median;
    floor_json = {{"median", f.median}, {"values", f.values}};
  }

  ordered_json j;
  j["provenance"] = provenance_to_json(prov);
  j["method"] = method_name(est.method);
  j["chi2"] = chi2_to_json(chi2);
  j["shot_noise_floor"] = floor_json;
  j["noise_summary"] = noise_summary_to_json(noise_summary(est.g_hat, basis, design.n_qubits(), floor));
  if (!cfg.reference_file.empty()) {
    const LindbladModel ref = read_model(cfg.reference_file);
    const CMat g_ref = to_pauli_matrix(ref.g(), ref.basis());
    const CMat g_est = to_pauli_matrix(est.g_hat, basis);
    j["frobenius_distance"] = frobenius_distance(g_est, g_ref);
    j["relative_frobenius_distance"] = frobenius_distance(g_est, g_ref, true);
  }
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const fs::path path = dir / "diagnostics.json";
  write_json(path, j);
  std::cout << path.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ bench

int run_bench(const Config& cfg, const Provenance& prov) {
  bench::BenchOptions o;
  o.repeats = cfg.paper_scale ? 100 : cfg.repeats;
  o.seed = cfg.seed.value_or(1);
  o.jobs = cfg.jobs;
  o.max_iter = cfg.max_iter;
  o.eta = cfg.eta;
  o.gamma = cfg.gamma;
  o.tol = cfg.tol;
  o.epsilon = cfg.epsilon;
  o.subset_start = cfg.subset_start;
  o.subset_step = cfg.subset_step;
  o.subset_limit = cfg.paper_scale ? std::nullopt : cfg.subset_limit;
  o.shots_per_setting = parse_shots(cfg.shots);
  o.full_ml_fd_gradient = cfg.fd_gradient;
  const bench::BenchResult r = bench::run_figure(cfg.figure, o);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const std::string stem = "figure" + std::to_string(cfg.figure);
  write_text(dir / (stem + ".csv"), provenance_comment(prov) + bench::to_csv(r));
  ordered_json summary;
  summary["provenance"] = provenance_to_json(prov);
  summary["figure"] = r.figure;
  summary["metric"] = r.metric;
  ordered_json values = ordered_json::object();
  for (const auto& [key, v] : r.summary) values[key] = v;
  summary["summary"] = values;
  write_json(dir / (stem + ".summary.json"), summary);
  std::cout << (dir / (stem + ".csv")).string() << "\n";
  return 0;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const SizeLimitError*>(&e)) return "SizeLimitError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const NotPsdError*>(&e)) return "NotPsdError";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindbladian quantum tomography toolkit"};
  app.set_version_flag("--version", LQT_VERSION);
  app.require_subcommand(1);
  Config cfg;
  int n_qubits = 2;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--shots-per-setting", cfg.shots, "Shots per (state, time, basis), or inf");
    sub->add_option("--times", cfg.times, "Evolution times")->delimiter(',');
  };
  auto add_basis = [&](CLI::App* sub) {
    sub->add_option("--basis", cfg.basis, "Operator basis")->check(CLI::IsMember({"pauli", "file"}));
    sub->add_option("--basis-file", cfg.basis_file, "JSON {coeffs} basis for --basis file");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "Estimator")->check(CLI::IsMember({"full", "dia", "pgdm", "cs"}));
    sub->add_option("--epsilon", cfg.epsilon, "CS residual bound per configuration");
    sub->add_option("--eta", cfg.eta, "DIA first probe or pGDM step");
    sub->add_option("--gamma", cfg.gamma, "pGDM momentum");
    sub->add_option("--max-iter", cfg.max_iter, "Iteration cap");
    sub->add_option("--tol", cfg.tol, "Stopping threshold");
    sub->add_flag("--fd-gradient", cfg.fd_gradient, "Full ML with finite-difference gradients");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Model and design to a counts (or probability) file");
  add_shared(simulate);
  add_design(simulate);
  simulate->add_option("--model", cfg.model_file, "Model JSON");
  simulate->add_option("--structured-rates", cfg.rates, "Five-channel two-qubit rates (Z1, Z2, damping1, damping2, XX)")
      ->delimiter(',');
  simulate->add_option("--target", cfg.target, "Hamiltonian for --structured-rates");
  simulate->add_option("--name", cfg.name, "Output file stem");

  CLI::App* linearize = app.add_subcommand("linearize", "Design and target unitary to a cached linear model");
  add_shared(linearize);
  add_design(linearize);
  add_basis(linearize);
  linearize->add_option("--target", cfg.target, "identity, rx_half_pi or ms_half_pi");
  linearize->add_option("--n-qubits", n_qubits, "Register size")->check(CLI::Range(1, 2));

  CLI::App* estimate = app.add_subcommand("estimate", "Counts and method to a result JSON");
  add_shared(estimate);
  add_basis(estimate);
  add_solver(estimate);
  estimate->add_option("--counts", cfg.counts_file, "Counts or probability CSV")->check(CLI::ExistingFile);
  estimate->add_option("--target", cfg.target, "Target unitary (default by register size)");
  estimate->add_option("--linear-model", cfg.linear_file, "Cached linear model")->check(CLI::ExistingFile);
  estimate->add_option("--subset-size", cfg.subset_size, "Random subset of independent configurations");
  estimate->add_option("--initial-trace", cfg.initial_trace, "Trace of the starting point");
  estimate->add_flag("--estimate-hamiltonian", cfg.estimate_hamiltonian, "Full ML: fit H as well");

  CLI::App* diagnose = app.add_subcommand("diagnose", "Result and counts to chi^2, noise summary and distances");
  add_shared(diagnose);
  diagnose->add_option("--result", cfg.result_file, "Result JSON")->check(CLI::ExistingFile);
  diagnose->add_option("--counts", cfg.counts_file, "Counts or probability CSV")->check(CLI::ExistingFile);
  diagnose->add_option("--linear-model", cfg.linear_file, "Cached linear model")->check(CLI::ExistingFile);
  diagnose->add_option("--reference", cfg.reference_file, "True model JSON")->check(CLI::ExistingFile);
  diagnose->add_option("--shot-noise-repeats", cfg.floor_repeats, "Repeats of the shot-noise floor (0 skips it)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Figure reproduction harnesses");
  add_shared(bench_cmd);
  add_solver(bench_cmd);
  bench_cmd->add_option("--figure", cfg.figure, "Figure number")->required()->check(CLI::Range(2, 7));
  bench_cmd->add_option("--repeats", cfg.repeats, "Draws per curve");
  bench_cmd->add_option("--subset-start", cfg.subset_start, "First subset size");
  bench_cmd->add_option("--subset-step", cfg.subset_step, "Subset size increment");
  bench_cmd->add_option("--subset-limit", cfg.subset_limit, "Skip subset sizes above this (the full set always runs)");
  bench_cmd->add_option("--shots-per-setting", cfg.shots, "Shots for the finite-shot figures");
  bench_cmd->add_flag("--paper-scale", cfg.paper_scale, "100 draws, every subset size");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const Provenance prov = provenance(cfg, command, canonical_args(argc, argv));
  try {
    if (command == "simulate") return run_simulate(cfg, prov);
    if (command == "linearize") return run_linearize(cfg, prov, n_qubits);
    if (command == "estimate") return run_estimate(cfg, prov);
    if (command == "diagnose") return run_diagnose(cfg, prov);
    return run_bench(cfg, prov);
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = error_kind(e);
    err["message"] = e.what();
    err["command"] = command;
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
