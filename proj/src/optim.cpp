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

#include "lqt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lqt::optim {

namespace {

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), clamped into the bracket interior.
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

}  // namespace

LineSearchResult wolfe_line_search(const Objective& f, const RVec& x, double f0, const RVec& g0, const RVec& dir,
                                   double step0, const LineSearchOptions& options) {
  LineSearchResult out;
  const double slope0 = g0.dot(dir);
  if (!(slope0 < 0.0)) return out;

  RVec grad;
  auto eval = [&](double t, double& value, double& slope) {
    value = f(x + t * dir, &grad);
    slope = grad.dot(dir);
    ++out.evaluations;
  };

  double prev_t = 0.0;
  double prev_f = f0;
  double prev_slope = slope0;
  double t = step0;
  double lo = 0.0, lo_f = f0, lo_slope = slope0;
  double hi = 0.0, hi_f = 0.0, hi_slope = 0.0;
  bool bracketed = false;

  while (out.evaluations < options.max_evaluations) {
    double ft, st;
    eval(t, ft, st);
    if (!std::isfinite(ft)) {
      t = 0.5 * (prev_t + t);
      continue;
    }
    if (ft > f0 + options.c1 * t * slope0 || (out.evaluations > 1 && ft >= prev_f)) {
      lo = prev_t, lo_f = prev_f, lo_slope = prev_slope;
      hi = t, hi_f = ft, hi_slope = st;
      bracketed = true;
      break;
    }
    if (std::abs(st) <= -options.c2 * slope0) {
      out = {t, ft, grad, out.evaluations, true};
      return out;
    }
    if (st >= 0.0) {
      lo = t, lo_f = ft, lo_slope = st;
      hi = prev_t, hi_f = prev_f, hi_slope = prev_slope;
      bracketed = true;
      break;
    }
    prev_t = t, prev_f = ft, prev_slope = st;
    out.step = t, out.value = ft, out.grad = grad;
    t *= 2.0;
  }
  if (!bracketed) {
    out.ok = out.step > 0.0;
    return out;
  }

  while (out.evaluations < options.max_evaluations) {
    const double tz = cubic_step(lo, lo_f, lo_slope, hi, hi_f, hi_slope);
    double ft, st;
    eval(tz, ft, st);
    if (ft > f0 + options.c1 * tz * slope0 || ft >= lo_f) {
      hi = tz, hi_f = ft, hi_slope = st;
    } else {
      if (std::abs(st) <= -options.c2 * slope0) {
        out = {tz, ft, grad, out.evaluations, true};
        return out;
      }
      if (st * (hi - lo) >= 0.0) {
        hi = lo, hi_f = lo_f, hi_slope = lo_slope;
      }
      lo = tz, lo_f = ft, lo_slope = st;
    }
    if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) break;
  }
  // Budget exhausted: accept the best sufficient-decrease point if there is one.
  if (lo > 0.0 && lo_f < f0) {
    f(x + lo * dir, &grad);
    ++out.evaluations;
    out.step = lo;
    out.value = lo_f;
    out.grad = grad;
    out.ok = true;
  }
  return out;
}

Result nonlinear_cg(const Objective& f, RVec x0, const CgOptions& options, const Callback& callback) {
  Result res;
  res.x = std::move(x0);
  RVec g;
  double fx = f(res.x, &g);
  res.evaluations = 1;
  RVec dir = -g;
  double step = options.initial_step;
  double prev_slope = 0.0;

  for (int it = 1; it <= options.max_iter; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= options.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient norm below tolerance";
      break;
    }
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
    }
    // Initial trial from the previous step's decrease along the previous direction.
    if (it > 1 && slope != 0.0) step = std::min(1e6, step * prev_slope / slope);
    LineSearchResult ls = wolfe_line_search(f, res.x, fx, g, dir, step, options.line_search);
    res.evaluations += ls.evaluations;
    if (!ls.ok) {
      if (dir.dot(-g) < g.squaredNorm() * (1.0 - 1e-12)) {
        // Retry once from steepest descent.
        dir = -g;
        slope = -g.squaredNorm();
        ls = wolfe_line_search(f, res.x, fx, g, dir, options.initial_step / std::max(1.0, gnorm),
                               options.line_search);
        res.evaluations += ls.evaluations;
      }
      if (!ls.ok) {
        res.stop_reason = "line search failed";
        break;
      }
    }
    res.x += ls.step * dir;
    const double f_prev = fx;
    fx = ls.value;
    const RVec g_prev = g;
    g = ls.grad;
    step = ls.step;
    prev_slope = slope;
    res.iterations = it;

    const double beta = std::max(0.0, g.dot(g - g_prev) / g_prev.squaredNorm());
    dir = -g + beta * dir;

    if (callback && !callback({it, fx, ls.step, g.norm()}, res.x)) {
      res.stop_reason = "stopped by callback";
      break;
    }
    if (options.f_tol > 0.0 && std::abs(f_prev - fx) <= options.f_tol * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      res.stop_reason = "relative cost change below tolerance";
      break;
    }
    if (it == options.max_iter) res.stop_reason = "iteration limit";
  }
  if (res.stop_reason.empty()) res.stop_reason = "iteration limit";
  res.value = fx;
  return res;
}

Result lbfgs(const Objective& f, RVec x0, const LbfgsOptions& options, const Callback& callback) {
  Result res;
  res.x = std::move(x0);
  RVec g;
  double fx = f(res.x, &g);
  res.evaluations = 1;
  std::deque<RVec> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int it = 1; it <= options.max_iter; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= options.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient norm below tolerance";
      break;
    }
    // Two-loop recursion.
    RVec q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t j = s_hist.size(); j-- > 0;) {
      alpha[j] = rho_hist[j] * s_hist[j].dot(q);
      q -= alpha[j] * y_hist[j];
    }
    double gamma = 1.0 / std::max(1.0, gnorm);
    if (!s_hist.empty()) gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    RVec dir = gamma * q;
    for (std::size_t j = 0; j < s_hist.size(); ++j) {
      const double b = rho_hist[j] * y_hist[j].dot(dir);
      dir += (alpha[j] - b) * s_hist[j];
    }
    dir = -dir;
    if (!(g.dot(dir) < 0.0)) {
      s_hist.clear(), y_hist.clear(), rho_hist.clear();
      dir = -g / std::max(1.0, gnorm);
    }
    LineSearchResult ls = wolfe_line_search(f, res.x, fx, g, dir, 1.0, options.line_search);
    res.evaluations += ls.evaluations;
    if (!ls.ok) {
      if (!s_hist.empty()) {
        s_hist.clear(), y_hist.clear(), rho_hist.clear();
        continue;
      }
      res.stop_reason = "line search failed";
      break;
    }
    RVec s = ls.step * dir;
    RVec y = ls.grad - g;
    res.x += s;
    const double f_prev = fx;
    fx = ls.value;
    g = ls.grad;
    res.iterations = it;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front(), y_hist.pop_front(), rho_hist.pop_front();
      }
    }
    if (callback && !callback({it, fx, ls.step, g.norm()}, res.x)) {
      res.stop_reason = "stopped by callback";
      break;
    }
    if (std::abs(f_prev - fx) <= options.f_tol * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      res.stop_reason = "relative cost change below tolerance";
      break;
    }
  }
  if (res.stop_reason.empty()) res.stop_reason = "iteration limit";
  res.value = fx;
  return res;
}

}  // namespace lqt::optim
