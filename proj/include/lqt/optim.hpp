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

#include <functional>
#include <string>

#include "lqt/common.hpp"

namespace lqt::optim {

/// f(x); fills `grad` when non-null.
using Objective = std::function<double(const RVec& x, RVec* grad)>;

struct Iterate {
  int iteration = 0;
  double value = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
};

/// Called after every accepted step; returning false stops the run.
using Callback = std::function<bool(const Iterate& it, const RVec& x)>;

struct Result {
  RVec x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string stop_reason;
};

struct LineSearchOptions {
  double c1 = 1e-4;
  double c2 = 0.1;
  int max_evaluations = 30;
};

struct CgOptions {
  int max_iter = 1000;
  double grad_tol = 1e-10;
  /// Relative change of f between iterations that counts as converged (0 disables).
  double f_tol = 0.0;
  double initial_step = 1.0;
  LineSearchOptions line_search;
};

/// Polak-Ribiere+ nonlinear conjugate gradient with a strong-Wolfe line search;
/// restarts along -g whenever the direction stops being a descent direction.
Result nonlinear_cg(const Objective& f, RVec x0, const CgOptions& options, const Callback& callback = nullptr);

struct LbfgsOptions {
  int max_iter = 500;
  int memory = 10;
  double grad_tol = 1e-9;
  double f_tol = 1e-14;
  LineSearchOptions line_search{1e-4, 0.9, 30};
};

Result lbfgs(const Objective& f, RVec x0, const LbfgsOptions& options, const Callback& callback = nullptr);

struct LineSearchResult {
  double step = 0.0;
  double value = 0.0;
  RVec grad;
  int evaluations = 0;
  bool ok = false;
};

/// Strong-Wolfe search along `dir` from x (value f0, slope g0.dir < 0); bracketing plus zoom
/// with safeguarded cubic interpolation.
LineSearchResult wolfe_line_search(const Objective& f, const RVec& x, double f0, const RVec& g0, const RVec& dir,
                                   double step0, const LineSearchOptions& options);

}  // namespace lqt::optim
