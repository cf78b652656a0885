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

#include "lqt/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "lqt/diagnostics.hpp"
#include "lqt/expm.hpp"
#include "lqt/lindblad.hpp"
#include "lqt/optim.hpp"

namespace lqt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Re Tr{A^dag B}
double inner(const CMat& a, const CMat& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

class TraceRecorder {
 public:
  TraceRecorder(const CommonOptions& options, DescentTrace& trace)
      : options_(options), trace_(trace), start_(Clock::now()) {
    if (options.reference) ref_norm_ = options.reference->norm();
  }

  bool due(int iteration, bool last) const {
    return last || options_.trace_stride <= 1 || iteration % options_.trace_stride == 0;
  }

  void record(int iteration, double cost, double step, double grad_norm, const CMat& g, double chi2) {
    TraceRecord r;
    r.iteration = iteration;
    r.cost = cost;
    r.step = step;
    r.grad_norm = grad_norm;
    if (options_.reference) {
      r.distance = (g - *options_.reference).norm();
      r.relative_distance = ref_norm_ > 0.0 ? r.distance / ref_norm_ : r.distance;
    }
    r.chi2 = chi2;
    r.elapsed_seconds = seconds_since(start_);
    if (!trace_.empty() && trace_.back().iteration == iteration) return;
    trace_.push(r);
  }

 private:
  const CommonOptions& options_;
  DescentTrace& trace_;
  Clock::time_point start_;
  double ref_norm_ = 0.0;
};

CMat initial_matrix(const CommonOptions& options, std::size_t k, double t_max) {
  if (options.initial_g) {
    if (options.initial_g->rows() != static_cast<Eigen::Index>(k) || options.initial_g->cols() != static_cast<Eigen::Index>(k)) {
      throw ValidationError("initial G has the wrong size");
    }
    return hermitian_part(*options.initial_g);
  }
  const double scale = t_max > 0.0 ? options.initial_trace / t_max : options.initial_trace;
  return (scale / static_cast<double>(k)) * CMat::Identity(k, k);
}

// Square factor L with L L^dag = G (PSD part).
CMat psd_factor(const CMat& g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g));
  const RVec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

double chi2_of(const LinearProblem& problem, const RVec& x) {
  const RVec p = problem.probabilities(x);
  return pearson_chi2_rows(p, problem.frequencies(), problem.row_shots(), problem.row_groups()).chi2;
}

bool finite_shots(const LinearProblem& problem) {
  return std::all_of(problem.row_shots().begin(), problem.row_shots().end(),
                     [](double s) { return std::isfinite(s); });
}

double negative_log_likelihood(const ProbabilityTensor& p, const FrequencyTensor& freq, std::size_t d) {
  double c = 0.0;
  for (std::size_t e = 0; e < p.size(); ++e) {
    if (!freq.present(e / d)) continue;
    const double f = freq.values[e];
    if (f == 0.0) continue;
    c -= f * std::log(std::max(p[e], kProbabilityClamp));
  }
  return c;
}

double max_time(const ExperimentDesign& design) { return design.times().empty() ? 1.0 : design.times().back(); }

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kFull: return "full";
    case Method::kDia: return "dia";
    case Method::kPgdm: return "pgdm";
    case Method::kCs: return "cs";
  }
  return "dia";
}

Method parse_method(const std::string& name) {
  if (name == "full") return Method::kFull;
  if (name == "dia") return Method::kDia;
  if (name == "pgdm") return Method::kPgdm;
  if (name == "cs") return Method::kCs;
  throw ValidationError("unknown method '" + name + "'");
}

void DescentTrace::push(const TraceRecord& r) {
  if (!records.empty() && r.iteration <= records.back().iteration) {
    throw Error("trace iterations must increase");
  }
  records.push_back(r);
}

CMat project_psd(const CMat& g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g));
  const RVec ev = es.eigenvalues().cwiseMax(0.0);
  CMat out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

// ---------------------------------------------------------------- full ML

FullModelEvaluator::FullModelEvaluator(const ExperimentDesign& design, const OperatorBasis& basis)
    : design_(design), paulis_(design.n_qubits()) {
  const std::size_t d = design.dim();
  const std::size_t k = d * d - 1;
  const OperatorBasis b = basis.coeffs.size() == 0 ? OperatorBasis::pauli(k) : basis;
  if (b.size() != k) throw ValidationError("operator basis size does not match d^2 - 1");
  b.validate();
  ops_ = b.operators(paulis_);
  const auto dd = static_cast<Eigen::Index>(d * d);
  vec_ops_.resize(dd, static_cast<Eigen::Index>(k));
  for (std::size_t p = 0; p < k; ++p) vec_ops_.col(static_cast<Eigen::Index>(p)) = vectorize(ops_[p]);
  vec_ops_conj_ = vec_ops_.conjugate();

  const auto& states = design.initial_states().states;
  states_.resize(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(states.size()));
  for (std::size_t s = 0; s < states.size(); ++s) states_.col(static_cast<Eigen::Index>(s)) = vectorize(states[s]);
  const auto& projectors = design.projectors();
  projectors_adj_.resize(static_cast<Eigen::Index>(projectors.size()), static_cast<Eigen::Index>(d * d));
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    // Tr{P rho} = vec(P^dag)^dag vec(rho); projectors are Hermitian.
    projectors_adj_.row(static_cast<Eigen::Index>(j)) = vectorize(projectors[j]).adjoint();
  }
}

CMat FullModelEvaluator::hamiltonian(const RVec& c) const {
  const std::size_t d = design_.dim();
  CMat h = CMat::Zero(d, d);
  if (c.size() == 0) return h;
  if (static_cast<std::size_t>(c.size()) != d * d - 1) throw ValidationError("c must have d^2 - 1 entries");
  for (Eigen::Index a = 0; a < c.size(); ++a) h += c[a] * paulis_.element(static_cast<std::size_t>(a) + 1);
  return h;
}

CMat FullModelEvaluator::liouvillian(const CMat& hamiltonian, const CMat& factor) const {
  const auto d = static_cast<Eigen::Index>(design_.dim());
  // Column n of v is vec(J_n), J_n = sum_p L(p, n) B_p.
  const CMat v = vec_ops_ * factor;
  const CMat outer = v * v.adjoint();  // outer(i + j d, a + b d) = sum_n J_n(i, j) conj(J_n(a, b))
  CMat anti(d, d);                     // sum_n J_n^dag J_n
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (Eigen::Index l = 0; l < d; ++l) acc += outer(l + j * d, l + i * d);
      anti(i, j) = acc;
    }
  }
  const cplx mi(0.0, -1.0);
  CMat lv(d * d, d * d);
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index i = 0; i < d; ++i) {
          cplx x = outer(i + j * d, a + b * d);
          if (a == b) x += mi * hamiltonian(i, j) - 0.5 * anti(i, j);
          if (i == j) x += -mi * hamiltonian(b, a) - 0.5 * anti(b, a);
          lv(a * d + i, b * d + j) = x;
        }
      }
    }
  }
  return lv;
}

ProbabilityTensor FullModelEvaluator::probabilities(const CMat& hamiltonian, const CMat& factor) const {
  const std::size_t d = design_.dim();
  const CMat lv = liouvillian(hamiltonian, factor);
  ProbabilityTensor out(design_.n_entries());
  const std::size_t nb = design_.n_bases();
  for (std::size_t i = 0; i < design_.n_times(); ++i) {
    const CMat evolved = expm(design_.times()[i] * lv) * states_;
    const RMat probs = (projectors_adj_ * evolved).real();  // (b d + m) x s
    for (std::size_t s = 0; s < design_.n_states(); ++s) {
      for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t m = 0; m < d; ++m) {
          out[design_.entry_index(s, i, b, m)] =
              probs(static_cast<Eigen::Index>(b * d + m), static_cast<Eigen::Index>(s));
        }
      }
    }
  }
  return out;
}

double FullModelEvaluator::cost_and_gradient(const CMat& hamiltonian, const CMat& factor, const FrequencyTensor& freq,
                                             CMat& grad_factor, RVec* grad_c) const {
  const std::size_t d = design_.dim();
  const auto di = static_cast<Eigen::Index>(d);
  const std::size_t nb = design_.n_bases();
  const CMat lv = liouvillian(hamiltonian, factor);
  const CMat lv_adj = lv.adjoint();

  // Gamma: gradient of the cost with respect to the superoperator, dC = Re Tr{Gamma^dag dLv}.
  CMat gamma = CMat::Zero(lv.rows(), lv.cols());
  double cost = 0.0;
  RMat dcdp(static_cast<Eigen::Index>(nb * d), static_cast<Eigen::Index>(design_.n_states()));
  for (std::size_t i = 0; i < design_.n_times(); ++i) {
    const double t = design_.times()[i];
    const RMat probs = (projectors_adj_ * (expm(t * lv) * states_)).real();
    dcdp.setZero();
    bool any = false;
    for (std::size_t s = 0; s < design_.n_states(); ++s) {
      for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t group = design_.group_index(s, i, b);
        if (!freq.present(group)) continue;
        for (std::size_t m = 0; m < d; ++m) {
          const double f = freq.values[group * d + m];
          if (f == 0.0) continue;
          const auto row = static_cast<Eigen::Index>(b * d + m);
          const auto col = static_cast<Eigen::Index>(s);
          const double p = probs(row, col);
          cost -= f * std::log(std::max(p, kProbabilityClamp));
          if (p > kProbabilityClamp) {
            dcdp(row, col) = -f / p;
            any = true;
          }
        }
      }
    }
    if (!any) continue;
    const CMat gamma_e = projectors_adj_.adjoint() * dcdp.cast<cplx>() * states_.adjoint();
    gamma += t * expm_frechet(t * lv_adj, gamma_e);
  }

  // Partial traces of conj(Gamma) over the two tensor factors of vec space (column stacking:
  // I (x) A acts on the row index, A^T (x) I on the column index).
  CMat left = CMat::Zero(di, di);   // sum_a conj Gamma(a d + i, a d + j)
  CMat right = CMat::Zero(di, di);  // sum_i conj Gamma(a d + i, b d + i)
  for (Eigen::Index a = 0; a < di; ++a) {
    left += gamma.block(a * di, a * di, di, di).conjugate();
    for (Eigen::Index b = 0; b < di; ++b) right(a, b) = gamma.block(a * di, b * di, di, di).diagonal().conjugate().sum();
  }

  // M(p, q) = Tr{Gamma^dag S_pq}, S_pq the dissipator superoperator of G_pq.
  const Eigen::Index dd = di * di;
  CMat reshuffled(dd, dd);  // R(i + j d, a + b d) = conj Gamma(a d + i, b d + j)
  for (Eigen::Index a = 0; a < di; ++a) {
    for (Eigen::Index b = 0; b < di; ++b) {
      for (Eigen::Index i = 0; i < di; ++i) {
        for (Eigen::Index j = 0; j < di; ++j) reshuffled(i + j * di, a + b * di) = std::conj(gamma(a * di + i, b * di + j));
      }
    }
  }
  CMat m = vec_ops_.transpose() * reshuffled * vec_ops_conj_;
  const CMat z = left + right.transpose();
  const auto kk = static_cast<Eigen::Index>(ops_.size());
  CMat bz(dd, kk);
  for (Eigen::Index p = 0; p < kk; ++p) bz.col(p) = vectorize(ops_[static_cast<std::size_t>(p)] * z.transpose());
  m -= 0.5 * (vec_ops_.adjoint() * bz).transpose();

  // G = L L^dag.
  grad_factor = (m.conjugate() + m.transpose()) * factor;

  if (grad_c != nullptr) {
    // H = sum_a c_a E_a; dLv = -i (I (x) dH - dH^T (x) I).
    const CMat zh = left - right.transpose();
    grad_c->resize(static_cast<Eigen::Index>(d * d - 1));
    for (std::size_t a = 1; a < d * d; ++a) {
      const cplx v = (zh.cwiseProduct(paulis_.element(a))).sum();
      (*grad_c)[static_cast<Eigen::Index>(a) - 1] = (cplx(0.0, -1.0) * v).real();
    }
  }
  return cost;
}

double FullModelEvaluator::cost(const CMat& hamiltonian, const CMat& factor, const FrequencyTensor& freq) const {
  return negative_log_likelihood(probabilities(hamiltonian, factor), freq, design_.dim());
}

double cost_full(const RVec& c, const CMat& g, const FrequencyTensor& freq, const ExperimentDesign& design,
                 const OperatorBasis& basis) {
  const FullModelEvaluator eval(design, basis);
  return eval.cost(eval.hamiltonian(c), psd_factor(g), freq);
}

EstimationResult full_ml_estimate(const FrequencyTensor& freq, const ExperimentDesign& design,
                                  const FullMlOptions& options) {
  const auto start = Clock::now();
  const FullModelEvaluator eval(design, options.basis);
  const std::size_t k = eval.k();
  const auto kk = static_cast<Eigen::Index>(k);
  const std::size_t n_chol = k * k;
  const std::size_t n_ham = options.estimate_hamiltonian ? k : 0;
  RVec c_fixed = options.c.size() == 0 ? RVec::Zero(kk) : options.c;
  if (static_cast<std::size_t>(c_fixed.size()) != k) throw ValidationError("c must have d^2 - 1 entries");

  // Lower-triangular factor: real diagonal first, then (Re, Im) of L(p, q), p > q.
  auto unpack_factor = [&](const RVec& theta) {
    CMat l = CMat::Zero(kk, kk);
    Eigen::Index pos = 0;
    for (Eigen::Index p = 0; p < kk; ++p) l(p, p) = theta[pos++];
    for (Eigen::Index q = 0; q < kk; ++q) {
      for (Eigen::Index p = q + 1; p < kk; ++p) {
        l(p, q) = {theta[pos], theta[pos + 1]};
        pos += 2;
      }
    }
    return l;
  };
  auto hamiltonian_of = [&](const RVec& theta) {
    return n_ham > 0 ? eval.hamiltonian(theta.tail(kk)) : eval.hamiltonian(c_fixed);
  };

  const CMat g0 = initial_matrix(options, k, max_time(design));
  // Pivot-free Cholesky of a PSD start; a tiny ridge keeps it defined for singular inputs.
  Eigen::LLT<CMat> llt(g0 + 1e-14 * CMat::Identity(kk, kk));
  if (llt.info() != Eigen::Success) throw ValidationError("initial G is not positive definite");
  const CMat l0 = llt.matrixL();
  RVec theta0(static_cast<Eigen::Index>(n_chol + n_ham));
  {
    Eigen::Index pos = 0;
    for (Eigen::Index p = 0; p < kk; ++p) theta0[pos++] = l0(p, p).real();
    for (Eigen::Index q = 0; q < kk; ++q) {
      for (Eigen::Index p = q + 1; p < kk; ++p) {
        theta0[pos++] = l0(p, q).real();
        theta0[pos++] = l0(p, q).imag();
      }
    }
    if (n_ham > 0) theta0.tail(kk) = c_fixed;
  }

  const double h = options.fd_step;
  optim::Objective objective = [&](const RVec& theta, RVec* grad) {
    if (grad != nullptr && options.analytic_gradient) {
      CMat gl;
      RVec gc;
      const double value = eval.cost_and_gradient(hamiltonian_of(theta), unpack_factor(theta), freq, gl,
                                                  n_ham > 0 ? &gc : nullptr);
      grad->resize(theta.size());
      Eigen::Index pos = 0;
      for (Eigen::Index p = 0; p < kk; ++p) (*grad)[pos++] = gl(p, p).real();
      for (Eigen::Index q = 0; q < kk; ++q) {
        for (Eigen::Index p = q + 1; p < kk; ++p) {
          (*grad)[pos++] = gl(p, q).real();
          (*grad)[pos++] = gl(p, q).imag();
        }
      }
      if (n_ham > 0) grad->tail(kk) = gc;
      return value;
    }
    const double value = eval.cost(hamiltonian_of(theta), unpack_factor(theta), freq);
    if (grad != nullptr) {
      grad->resize(theta.size());
      RVec t = theta;
      for (Eigen::Index j = 0; j < theta.size(); ++j) {
        t[j] = theta[j] + h;
        const double up = eval.cost(hamiltonian_of(t), unpack_factor(t), freq);
        t[j] = theta[j] - h;
        const double down = eval.cost(hamiltonian_of(t), unpack_factor(t), freq);
        t[j] = theta[j];
        (*grad)[j] = (up - down) / (2.0 * h);
      }
    }
    return value;
  };

  EstimationResult result;
  result.method = Method::kFull;
  TraceRecorder recorder(options, result.trace);
  const bool chi2 = options.track_chi2 && !freq.infinite_shots();

  auto chi2_at = [&](const RVec& theta) {
    if (!chi2) return std::numeric_limits<double>::quiet_NaN();
    return pearson_chi2(eval.probabilities(hamiltonian_of(theta), unpack_factor(theta)), freq, design).chi2;
  };

  {
    const RVec& t = theta0;
    const CMat l = unpack_factor(t);
    recorder.record(0, objective(t, nullptr), 0.0, 0.0, l * l.adjoint(), chi2_at(t));
  }

  optim::CgOptions cg;
  cg.max_iter = options.max_iter;
  cg.grad_tol = options.grad_tol;
  cg.initial_step = 1e-3;
  const optim::Result r = optim::nonlinear_cg(objective, theta0, cg, [&](const optim::Iterate& it, const RVec& theta) {
    if (recorder.due(it.iteration, it.iteration == options.max_iter)) {
      const CMat l = unpack_factor(theta);
      recorder.record(it.iteration, it.value, it.step, it.grad_norm, l * l.adjoint(), chi2_at(theta));
    }
    return true;
  });

  const CMat l = unpack_factor(r.x);
  result.g_hat = hermitian_part(l * l.adjoint());
  if (n_ham > 0) result.c_hat = r.x.tail(kk);
  result.iterations = r.iterations;
  result.converged = r.converged;
  result.stop_reason = r.stop_reason;
  if (result.trace.empty() || result.trace.back().iteration != r.iterations) {
    recorder.record(r.iterations, r.value, 0.0, 0.0, result.g_hat, chi2_at(r.x));
  }
  result.seconds = seconds_since(start);
  result.options = {{"max_iter", options.max_iter},
                    {"analytic_gradient", options.analytic_gradient ? 1.0 : 0.0},
                    {"fd_step", options.fd_step},
                    {"grad_tol", options.grad_tol},
                    {"estimate_hamiltonian", options.estimate_hamiltonian ? 1.0 : 0.0},
                    {"initial_trace", options.initial_trace}};
  return result;
}

// ---------------------------------------------------------------- linearized

double cost_linear(const CMat& g, const LinearizedModel& lin, const FrequencyTensor& freq) {
  return LinearProblem(lin, freq).cost(g);
}

CMat gradient_R(const CMat& g, const LinearizedModel& lin, const FrequencyTensor& freq) {
  return LinearProblem(lin, freq).gradient_matrix(g);
}

EstimationResult dia_estimate(const LinearProblem& problem, const DiaOptions& options) {
  if (!(options.eta_prime > 0.0)) throw ValidationError("DIA eta' must be positive");
  if (options.max_iter < 0) throw ValidationError("max_iter must be non-negative");
  const auto start = Clock::now();
  const std::size_t k = problem.k();
  const HermitianPacking& packing = problem.packing();
  // Cost per measured setting; the minimizer is unchanged and the step scale no longer
  // grows with the number of settings.
  const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(problem.n_groups(), 1));
  const bool chi2 = options.track_chi2 && finite_shots(problem);

  auto cost_at = [&](const CMat& l) { return scale * problem.cost(packing.pack(l * l.adjoint())); };
  auto cost_grad_at = [&](const CMat& l, CMat& r) {
    RVec grad;
    const double c = scale * problem.cost_and_gradient(packing.pack(l * l.adjoint()), grad);
    r = scale * packing.unpack_gradient(grad);
    return c;
  };

  EstimationResult result;
  result.method = Method::kDia;
  TraceRecorder recorder(options, result.trace);

  CMat l = psd_factor(initial_matrix(options, k, problem.max_time()));
  CMat r;
  double cost = cost_grad_at(l, r);
  CMat g = r * l;
  CMat g_prev, dir;
  double eta = options.eta_prime;
  auto chi2_at = [&](const CMat& lf) {
    return chi2 ? chi2_of(problem, packing.pack(lf * lf.adjoint())) : std::numeric_limits<double>::quiet_NaN();
  };
  recorder.record(0, cost, 0.0, g.norm(), l * l.adjoint(), chi2_at(l));

  int it = 0;
  for (it = 1; it <= options.max_iter; ++it) {
    const double stationarity = g.norm();
    if (stationarity <= options.tol) {
      result.converged = true;
      result.stop_reason = "stationarity below tolerance";
      --it;
      break;
    }
    if (it == 1) {
      dir = g;
    } else {
      const double denom = inner(g_prev, g_prev);
      const double gamma = denom > 0.0 ? std::max(inner(g, g - options.xi * g_prev) / denom, 0.0) : 0.0;
      dir = g + gamma * dir;
    }
    bool along_gradient = it == 1;
    if (inner(g, dir) <= 0.0) {
      dir = g;
      along_gradient = true;
    }

    // Quadratic model through eta = 0, eta', 2 eta'.
    bool accepted = false;
    double step = 0.0;
    double best_cost = cost;
    for (int attempt = 0; attempt <= 21 && !accepted; ++attempt) {
      const double c1 = cost_at(l - eta * dir);
      const double c2 = cost_at(l - 2.0 * eta * dir);
      const double a = (c2 - 2.0 * c1 + cost) / (2.0 * eta * eta);
      const double b = (4.0 * c1 - c2 - 3.0 * cost) / (2.0 * eta);
      if (a > 0.0 && b < 0.0) {
        const double eta_star = std::min(-b / (2.0 * a), 4.0 * eta);
        const double cs = cost_at(l - eta_star * dir);
        step = eta_star;
        best_cost = cs;
        if (c1 < best_cost) step = eta, best_cost = c1;
        if (c2 < best_cost) step = 2.0 * eta, best_cost = c2;
        if (best_cost < cost) {
          accepted = true;
          if (options.adapt_eta) {
            if (eta_star > 2.0 * eta) {
              eta *= 2.0;
            } else if (eta_star < 0.5 * eta) {
              eta *= 0.5;
            }
          }
          break;
        }
      } else if (a <= 0.0 && c2 < cost && c2 <= c1) {
        // Concave along the line but still decreasing: take the far probe.
        step = 2.0 * eta;
        best_cost = c2;
        accepted = true;
        if (options.adapt_eta) eta *= 2.0;
        break;
      }
      if (!along_gradient) {
        dir = g;  // retry along the gradient before shrinking
        along_gradient = true;
      } else {
        eta *= 0.5;
      }
    }
    if (!accepted) {
      result.stop_reason = "line search found no decrease (negative curvature)";
      --it;
      break;
    }

    l -= step * dir;
    const double prev_cost = cost;
    cost = cost_grad_at(l, r);
    g_prev = g;
    g = r * l;
    result.iterations = it;
    if (recorder.due(it, it == options.max_iter)) {
      recorder.record(it, cost, step, g.norm(), l * l.adjoint(), chi2_at(l));
    }
    if (options.f_tol > 0.0 && std::abs(prev_cost - cost) <= options.f_tol * std::max(1.0, std::abs(cost))) {
      result.converged = true;
      result.stop_reason = "relative cost change below tolerance";
      break;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  result.iterations = std::max(result.iterations, 0);
  result.g_hat = hermitian_part(l * l.adjoint());
  recorder.record(result.iterations, cost, 0.0, g.norm(), result.g_hat, chi2_at(l));
  result.seconds = seconds_since(start);
  result.options = {{"max_iter", options.max_iter}, {"eta_prime", options.eta_prime}, {"xi", options.xi},
                    {"tol", options.tol},           {"f_tol", options.f_tol},         {"initial_trace", options.initial_trace}};
  return result;
}

EstimationResult pgdm_estimate(const LinearProblem& problem, const PgdmOptions& options) {
  if (!(options.eta > 0.0)) throw ValidationError("pGDM eta must be positive");
  if (!(options.gamma >= 0.0 && options.gamma < 1.0)) throw ValidationError("pGDM gamma must be in [0, 1)");
  if (options.max_iter < 0) throw ValidationError("max_iter must be non-negative");
  const auto start = Clock::now();
  const std::size_t k = problem.k();
  const HermitianPacking& packing = problem.packing();
  const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(problem.n_groups(), 1));
  const bool chi2 = options.track_chi2 && finite_shots(problem);

  EstimationResult result;
  result.method = Method::kPgdm;
  TraceRecorder recorder(options, result.trace);

  CMat g = project_psd(initial_matrix(options, k, problem.max_time()));
  CMat momentum = CMat::Zero(k, k);
  RVec grad;
  double cost = scale * problem.cost_and_gradient(packing.pack(g), grad);
  CMat r = scale * packing.unpack_gradient(grad);
  auto chi2_at = [&](const CMat& gm) {
    return chi2 ? chi2_of(problem, packing.pack(gm)) : std::numeric_limits<double>::quiet_NaN();
  };
  recorder.record(0, cost, 0.0, r.norm(), g, chi2_at(g));

  int increases = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    momentum = options.gamma * momentum - options.eta * r;
    g = project_psd(g + momentum);
    const double prev = cost;
    cost = scale * problem.cost_and_gradient(packing.pack(g), grad);
    r = scale * packing.unpack_gradient(grad);
    result.iterations = it;
    if (recorder.due(it, it == options.max_iter)) recorder.record(it, cost, options.eta, r.norm(), g, chi2_at(g));
    if (cost > prev) {
      ++increases;
      if (options.reset_on_increase) momentum.setZero();
    } else {
      increases = 0;
    }
    if (increases >= options.divergence_window) {
      result.stop_reason = "cost increased for " + std::to_string(options.divergence_window) + " iterations";
      break;
    }
    if (std::abs(cost - prev) <= options.tol) {
      result.converged = true;
      result.stop_reason = "cost change below tolerance";
      break;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  result.g_hat = g;
  recorder.record(result.iterations, cost, 0.0, r.norm(), g, chi2_at(g));
  result.seconds = seconds_since(start);
  result.options = {{"max_iter", options.max_iter}, {"gamma", options.gamma}, {"eta", options.eta},
                    {"tol", options.tol},           {"initial_trace", options.initial_trace}};
  return result;
}

EstimationResult cs_estimate(const LinearProblem& problem, const CsOptions& options) {
  if (!(options.epsilon >= 0.0)) throw ValidationError("CS epsilon must be non-negative");
  if (options.max_iter < 0) throw ValidationError("max_iter must be non-negative");
  const auto start = Clock::now();
  const HermitianPacking& packing = problem.packing();
  const std::size_t k = problem.k();
  const auto m = static_cast<Eigen::Index>(packing.size());
  const auto kk = static_cast<Eigen::Index>(k);
  const RowMat a_packed = problem.configuration_matrix();
  const auto n = static_cast<double>(problem.n_configurations());
  const simd::KernelTable& kern = problem.kernels();
  const auto rows = static_cast<std::size_t>(a_packed.rows());
  const auto cols = static_cast<std::size_t>(a_packed.cols());

  // ADMM on scaled coordinates x~ = D x with D = 1 on the diagonal and sqrt(2) off it, so that
  // ||x~|| = ||G||_F and the PSD projection is Euclidean. Splitting: z1 = A x (residual ball),
  // z2 = x (weighted L1), z3 = x (PSD cone).
  RVec scale = RVec::Constant(m, std::sqrt(2.0));
  scale.head(kk).setOnes();
  const RowMat a = a_packed * scale.cwiseInverse().asDiagonal();
  const RVec target = problem.configuration_target();
  const double bound = std::sqrt(n) * options.epsilon;
  // L1 weights 1 (diagonal) and 2 (Re, Im off-diagonal) in packed units.
  RVec thresholds = RVec::Constant(m, 2.0 / std::sqrt(2.0));
  thresholds.head(kk).setOnes();
  RMat normal = RMat(a.transpose()) * a;
  normal.diagonal().array() += 2.0;
  const Eigen::LLT<RMat> chol(normal);

  auto apply = [&](const RVec& x) {
    RVec out(a.rows());
    kern.gemv(a.data(), rows, cols, cols, x.data(), out.data());
    return out;
  };
  auto apply_t = [&](const RVec& v) {
    RVec out = RVec::Zero(m);
    kern.gemv_t(a.data(), rows, cols, cols, v.data(), out.data());
    return out;
  };
  auto to_matrix = [&](const RVec& xs) { return packing.unpack(xs.cwiseQuotient(scale)); };
  auto from_matrix = [&](const CMat& g) { return RVec(packing.pack(g).cwiseProduct(scale)); };
  auto project_ball = [&](const RVec& v) {
    const RVec d = v - target;
    const double norm = d.norm();
    return norm <= bound ? v : RVec(target + (bound / norm) * d);
  };

  EstimationResult result;
  result.method = Method::kCs;
  TraceRecorder recorder(options, result.trace);

  RVec x = options.initial_g ? from_matrix(project_psd(*options.initial_g)) : RVec::Zero(m);
  RVec z1 = project_ball(apply(x));
  RVec z2 = x, z3 = x;
  RVec u1 = RVec::Zero(a.rows()), u2 = RVec::Zero(m), u3 = RVec::Zero(m);
  double rho = options.rho;
  const double alpha = options.relaxation;
  const double sqrt_dim = std::sqrt(static_cast<double>(a.rows() + 2 * m));

  for (int it = 1; it <= options.max_iter; ++it) {
    x = chol.solve(apply_t(z1 - u1) + (z2 - u2) + (z3 - u3));
    const RVec ax = apply(x);
    const RVec z1_old = z1, z2_old = z2, z3_old = z3;
    const RVec h1 = alpha * ax + (1.0 - alpha) * z1_old;
    const RVec h2 = alpha * x + (1.0 - alpha) * z2_old;
    const RVec h3 = alpha * x + (1.0 - alpha) * z3_old;

    z1 = project_ball(h1 + u1);
    const RVec v2 = h2 + u2;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double t = thresholds[i] / rho;
      z2[i] = v2[i] > t ? v2[i] - t : (v2[i] < -t ? v2[i] + t : 0.0);
    }
    z3 = from_matrix(project_psd(to_matrix(h3 + u3)));
    u1 += h1 - z1;
    u2 += h2 - z2;
    u3 += h3 - z3;

    const double primal =
        std::sqrt((ax - z1).squaredNorm() + (x - z2).squaredNorm() + (x - z3).squaredNorm());
    const double dual = rho * (apply_t(z1 - z1_old) + (z2 - z2_old) + (z3 - z3_old)).norm();
    const double eps_primal =
        sqrt_dim * options.abs_tol +
        options.rel_tol * std::max(std::sqrt(ax.squaredNorm() + 2.0 * x.squaredNorm()),
                                   std::sqrt(z1.squaredNorm() + z2.squaredNorm() + z3.squaredNorm()));
    const double eps_dual = std::sqrt(static_cast<double>(m)) * options.abs_tol +
                            options.rel_tol * rho * (apply_t(u1) + u2 + u3).norm();
    result.iterations = it;
    if (recorder.due(it, it == options.max_iter)) {
      const CMat g = to_matrix(z3);
      recorder.record(it, thresholds.dot(z3.cwiseAbs()), rho, (apply(z3) - target).norm(), g,
                      std::numeric_limits<double>::quiet_NaN());
    }
    if (primal <= eps_primal && dual <= eps_dual) {
      result.converged = true;
      result.stop_reason = "primal and dual residuals below tolerance";
      break;
    }
    // Residual balancing; the x-update does not depend on rho, only the scaled duals do.
    if (it % 10 == 0) {
      double factor = 1.0;
      if (primal > 10.0 * dual) factor = 2.0;
      if (dual > 10.0 * primal) factor = 0.5;
      if (factor != 1.0) {
        rho *= factor;
        u1 /= factor;
        u2 /= factor;
        u3 /= factor;
      }
    }
  }

  result.g_hat = to_matrix(z3);
  const double res_norm = (apply(z3) - target).norm();
  result.residual_norm = res_norm;
  result.residual_bound = bound;
  result.feasible = res_norm <= bound * (1.0 + options.feasibility_slack) + 1e-15;
  if (!*result.feasible) {
    result.converged = false;
    result.stop_reason =
        "infeasible: residual " + std::to_string(res_norm) + " exceeds bound " + std::to_string(bound);
  } else if (result.stop_reason.empty()) {
    result.stop_reason = "iteration limit";
  }
  if (result.trace.empty() || result.trace.back().iteration != result.iterations) {
    recorder.record(result.iterations, thresholds.dot(z3.cwiseAbs()), rho, res_norm, result.g_hat,
                    std::numeric_limits<double>::quiet_NaN());
  }
  result.seconds = seconds_since(start);
  result.options = {{"epsilon", options.epsilon},   {"max_iter", options.max_iter}, {"rho", options.rho},
                    {"relaxation", alpha},          {"abs_tol", options.abs_tol},   {"rel_tol", options.rel_tol},
                    {"initial_trace", options.initial_trace}};
  return result;
}

EstimationResult dia_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const DiaOptions& options) {
  return dia_estimate(LinearProblem(lin, freq), options);
}

EstimationResult pgdm_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const PgdmOptions& options) {
  return pgdm_estimate(LinearProblem(lin, freq), options);
}

EstimationResult cs_estimate(const LinearizedModel& lin, const FrequencyTensor& freq, const CsOptions& options) {
  return cs_estimate(LinearProblem(lin, freq), options);
}

std::vector<std::vector<std::vector<std::size_t>>> grow_configuration_subsets(const std::vector<std::size_t>& all,
                                                                             std::size_t start, std::size_t step,
                                                                             std::size_t repeats,
                                                                             std::uint64_t seed) {
  if (step == 0) throw ValidationError("subset step must be at least 1");
  if (start == 0 || start > all.size()) throw ValidationError("subset start must be in [1, total]");
  std::vector<std::vector<std::vector<std::size_t>>> out(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::vector<std::size_t> perm = all;
    std::mt19937_64 rng(derive_seed(seed, r));
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t size = start;; size += step) {
      const std::size_t n = std::min(size, all.size());
      std::vector<std::size_t> subset(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n));
      std::sort(subset.begin(), subset.end());
      out[r].push_back(std::move(subset));
      if (n == all.size()) break;
    }
  }
  return out;
}

}  // namespace lqt
