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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/lindblad.hpp"

namespace lqt::bench {

/// Run-time knobs shared by the figure harnesses; unset values take the figure default.
struct BenchOptions {
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::optional<int> max_iter;
  /// pGDM step and momentum.
  std::optional<double> eta;
  std::optional<double> gamma;
  /// pGDM stopping threshold.
  std::optional<double> tol;
  /// DIA first line-search probe.
  double eta_prime = 0.3;
  /// Absolute CS epsilon; when unset, epsilon_scale times the misfit scale of the data.
  std::optional<double> epsilon;
  double epsilon_scale = 1.2;
  std::size_t subset_start = 33;
  std::size_t subset_step = 21;
  /// Skip subset sizes above this (the full set is always run).
  std::optional<std::size_t> subset_limit;
  /// Shots per setting for the finite-shot figures (5, 6, 7).
  std::optional<std::uint64_t> shots_per_setting;
  /// Full ML with finite-difference gradients instead of the adjoint gradient.
  bool full_ml_fd_gradient = false;
};

/// One curve: samples[ix][repeat] at abscissa x[ix].
struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<std::vector<double>> samples;
};

struct QuantileRow {
  std::string series;
  double x = 0.0;
  double p20 = 0.0;
  double median = 0.0;
  double p80 = 0.0;
};

struct BenchResult {
  int figure = 0;
  std::string x_name;
  std::string metric;
  std::vector<Series> series;
  /// Scalar side results (timings, floors, settings).
  std::vector<std::pair<std::string, double>> summary;

  const Series& get(const std::string& name) const;
  double summary_value(const std::string& key) const;
  std::vector<QuantileRow> rows() const;
};

/// Linear-interpolation quantile, q in [0, 1]; NaN for an empty sample.
double quantile(std::vector<double> values, double q);

/// Header `series,<x_name>,percentile20,median,percentile80`.
std::string to_csv(const BenchResult& result);

/// Relative Frobenius error per iteration for DIA and full ML; random HS G (trace 0.25), MS target, exact data.
BenchResult figure2(const BenchOptions& options);
/// DIA vs pGDM per iteration on HS-uniform and rank-1 G (trace 0.01).
BenchResult figure3(const BenchOptions& options);
/// CS vs DIA error over nested configuration subsets of the five-channel model, exact data.
BenchResult figure4(const BenchOptions& options);
/// Single qubit, R_X(pi/2), one planted jump, finite shots: chi^2 per DIA iteration.
BenchResult figure5(const BenchOptions& options);
/// Two qubits, MS gate, finite shots on 96 configurations: decay-rate spectra of DIA and CS.
BenchResult figure6(const BenchOptions& options);
/// Two qubits, MS gate, finite shots: DIA, CS and CS in the sparsifying basis vs the full-ML estimate over subsets.
BenchResult figure7(const BenchOptions& options);

BenchResult run_figure(int figure, const BenchOptions& options);

/// Rates of the five-channel model used by figure 4.
StructuredRates figure4_rates();
/// Rates of the five-channel model used by figures 6 and 7.
StructuredRates finite_shot_rates();

/// Runs fn(0..n-1) on `jobs` threads; each index runs exactly once.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace lqt::bench
