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

#include "lqt/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "lqt/expm.hpp"

namespace lqt {
namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdClip = 1e-10;
constexpr double kStateTol = 1e-6;

void require_hermitian(const CMat& g, const char* what) {
  if (g.rows() != g.cols()) throw ValidationError(std::string(what) + " must be square");
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw ValidationError(std::string(what) + " is not Hermitian");
  }
}

}  // namespace

OperatorBasis OperatorBasis::pauli(std::size_t n_ops) {
  const auto n = static_cast<Eigen::Index>(n_ops);
  return OperatorBasis{CMat::Identity(n, n)};
}

bool OperatorBasis::is_identity(double tol) const {
  if (coeffs.rows() != coeffs.cols()) return false;
  return (coeffs - CMat::Identity(coeffs.rows(), coeffs.cols())).cwiseAbs().maxCoeff() <= tol;
}

void OperatorBasis::validate() const {
  if (coeffs.rows() == 0 || coeffs.rows() != coeffs.cols()) {
    throw ValidationError("operator basis coefficients must be a non-empty square matrix");
  }
  Eigen::FullPivLU<CMat> lu(coeffs);
  if (lu.rank() != coeffs.rows()) throw ValidationError("operator basis coefficients are rank deficient");
}

std::vector<CMat> OperatorBasis::operators(const PauliBasis& paulis) const {
  if (static_cast<std::size_t>(coeffs.cols()) + 1 != paulis.size()) {
    throw ValidationError("operator basis size does not match the Pauli basis");
  }
  std::vector<CMat> ops;
  ops.reserve(size());
  const auto d = static_cast<Eigen::Index>(paulis.dim());
  for (Eigen::Index p = 0; p < coeffs.rows(); ++p) {
    CMat op = CMat::Zero(d, d);
    for (Eigen::Index a = 0; a < coeffs.cols(); ++a) {
      if (coeffs(p, a) != cplx(0.0, 0.0)) op += coeffs(p, a) * paulis.element(static_cast<std::size_t>(a + 1));
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

CMat to_pauli_matrix(const CMat& g, const OperatorBasis& basis) {
  if (basis.is_identity()) return g;
  return basis.coeffs.transpose() * g * basis.coeffs.conjugate();
}

CMat from_pauli_matrix(const CMat& g_pauli, const OperatorBasis& basis) {
  if (basis.is_identity()) return g_pauli;
  const CMat bt_inv = basis.coeffs.transpose().fullPivLu().inverse();
  const CMat bc_inv = basis.coeffs.conjugate().fullPivLu().inverse();
  return bt_inv * g_pauli * bc_inv;
}

LindbladModel::LindbladModel(int n_qubits, RVec c, CMat g, OperatorBasis basis)
    : paulis_(std::make_shared<const PauliBasis>(n_qubits)),
      c_(std::move(c)),
      g_(std::move(g)),
      basis_(std::move(basis)) {
  const auto k = static_cast<Eigen::Index>(paulis_->size() - 1);
  if (c_.size() != k) throw ValidationError("Hamiltonian vector must have d^2-1 entries");
  if (g_.rows() != k || g_.cols() != k) throw ValidationError("Lindblad matrix must be (d^2-1)x(d^2-1)");
  if (basis_.coeffs.rows() != k) throw ValidationError("operator basis must have d^2-1 rows");
  basis_.validate();
  require_hermitian(g_, "Lindblad matrix");
  if (min_eigenvalue(g_) < -kPsdClip) throw NotPsdError("Lindblad matrix is not positive semidefinite");
}

LindbladModel::LindbladModel(int n_qubits, RVec c, CMat g)
    : LindbladModel(n_qubits, std::move(c), std::move(g),
                    OperatorBasis::pauli((std::size_t{1} << (2 * n_qubits)) - 1)) {}

CMat LindbladModel::hamiltonian() const {
  const auto d = static_cast<Eigen::Index>(dim());
  CMat h = CMat::Zero(d, d);
  for (Eigen::Index a = 0; a < c_.size(); ++a) h += c_(a) * paulis_->element(static_cast<std::size_t>(a + 1));
  return h;
}

CMat liouvillian(const CMat& hamiltonian, const CMat& g, const std::vector<CMat>& ops) {
  require_hermitian(g, "Lindblad matrix");
  if (static_cast<std::size_t>(g.rows()) != ops.size()) throw ValidationError("G size does not match operator basis");
  const Eigen::Index d = hamiltonian.rows();
  const CMat ident = CMat::Identity(d, d);
  CMat jump = CMat::Zero(d * d, d * d);
  CMat anti = CMat::Zero(d, d);
  for (std::size_t p = 0; p < ops.size(); ++p) {
    for (std::size_t q = 0; q < ops.size(); ++q) {
      const cplx gpq = g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (gpq == cplx(0.0, 0.0)) continue;
      jump += gpq * kron(ops[q].conjugate(), ops[p]);
      anti += gpq * (ops[q].adjoint() * ops[p]);
    }
  }
  return -kI * (kron(ident, hamiltonian) - kron(hamiltonian.transpose(), ident)) + jump -
         0.5 * (kron(ident, anti) + kron(anti.transpose(), ident));
}

CMat liouvillian_from_jumps(const CMat& hamiltonian, const std::vector<CMat>& jumps) {
  const Eigen::Index d = hamiltonian.rows();
  const CMat ident = CMat::Identity(d, d);
  CMat jump = CMat::Zero(d * d, d * d);
  CMat anti = CMat::Zero(d, d);
  for (const CMat& l : jumps) {
    jump += kron(l.conjugate(), l);
    anti += l.adjoint() * l;
  }
  return -kI * (kron(ident, hamiltonian) - kron(hamiltonian.transpose(), ident)) + jump -
         0.5 * (kron(ident, anti) + kron(anti.transpose(), ident));
}

CMat build_liouvillian(const LindbladModel& model) {
  return liouvillian(model.hamiltonian(), model.g(), model.basis().operators(model.paulis()));
}

CVec vectorize(const CMat& rho) {
  return Eigen::Map<const CVec>(rho.data(), rho.size());
}

CMat devectorize(const CVec& v, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (v.size() != d * d) throw ValidationError("vector length is not dim^2");
  return Eigen::Map<const CMat>(v.data(), d, d);
}

double min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian_part(a), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

CMat propagate(const LindbladModel& model, const CMat& rho0, double t) {
  if (!(t >= 0.0)) throw ValidationError("propagation time must be >= 0");
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (rho0.rows() != d || rho0.cols() != d) throw ValidationError("initial state has wrong dimension");
  const CMat prop = expm(t * build_liouvillian(model));
  CMat rho = devectorize(prop * vectorize(rho0), model.dim());
  if (min_eigenvalue(rho) < -kStateTol) {
    throw NotPsdError("propagated state has a negative eigenvalue; generator or convention is inconsistent");
  }
  return rho;
}

JumpDecomposition jump_decomposition(const CMat& g, const OperatorBasis& basis, const PauliBasis& paulis) {
  require_hermitian(g, "Lindblad matrix");
  Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian_part(g));
  if (eig.info() != Eigen::Success) throw ConvergenceError("Lindblad matrix eigendecomposition failed");
  const RVec& w = eig.eigenvalues();
  if (w.minCoeff() < -kPsdClip) throw NotPsdError("Lindblad matrix is not positive semidefinite");
  const std::vector<CMat> ops = basis.operators(paulis);
  JumpDecomposition out;
  for (Eigen::Index n = w.size() - 1; n >= 0; --n) {
    const CVec u = eig.eigenvectors().col(n);
    CMat l = CMat::Zero(ops.front().rows(), ops.front().cols());
    for (std::size_t p = 0; p < ops.size(); ++p) l += u(static_cast<Eigen::Index>(p)) * ops[p];
    out.rates.push_back(std::max(w(n), 0.0));
    out.coefficients.push_back(u);
    out.jump_ops.push_back(std::move(l));
  }
  return out;
}

JumpDecomposition jump_decomposition(const LindbladModel& model) {
  return jump_decomposition(model.g(), model.basis(), model.paulis());
}

CMat haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(n);
  CMat z(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ() * CMat::Identity(m, m);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMat sample_hs_random_G(std::size_t dim, double trace_scale, std::mt19937_64& rng) {
  if (dim == 0) throw ValidationError("dimension must be >= 1");
  const CMat u = haar_unitary(dim * dim, rng);
  // u applied to the first unit vector of C^dim (x) C^dim, reshaped as system x environment.
  const auto m = static_cast<Eigen::Index>(dim);
  CMat psi(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) psi(i, j) = u(i * m + j, 0);
  }
  CMat g = psi * psi.adjoint();
  g = hermitian_part(g);
  return g * (trace_scale / g.trace().real());
}

CMat sample_projector_G(std::size_t dim, std::size_t rank, double trace_scale, std::mt19937_64& rng) {
  if (rank < 1 || rank > dim) throw ValidationError("projector rank must be in [1, dim]");
  const CMat u = haar_unitary(dim, rng);
  const CMat v = u.leftCols(static_cast<Eigen::Index>(rank));
  CMat g = (trace_scale / static_cast<double>(rank)) * (v * v.adjoint());
  return hermitian_part(g);
}

std::array<CMat, 5> structured_jump_operators() {
  const CMat id = single_pauli(0);
  const CMat x = single_pauli(1);
  const CMat y = single_pauli(2);
  const CMat z = single_pauli(3);
  const CMat lower = 0.5 * (x - kI * y);
  return {kron(z, id), kron(id, z), kron(lower, id), kron(id, lower), kron(x, x)};
}

LindbladModel structured_noise_G(const StructuredRates& rates) {
  const std::array<double, 5> gammas = {rates.dephasing_1, rates.dephasing_2, rates.damping_1, rates.damping_2,
                                        rates.bit_flip};
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("structured noise rates must be finite and >= 0");
  }
  const PauliBasis paulis(2);
  const auto jumps = structured_jump_operators();
  CMat g = CMat::Zero(15, 15);
  for (std::size_t n = 0; n < jumps.size(); ++n) {
    const CVec v = paulis.decompose(jumps[n]).tail(15);
    g += gammas[n] * v * v.adjoint();
  }
  return LindbladModel(2, RVec::Zero(15), hermitian_part(g));
}

ProbabilityMap::ProbabilityMap(const ExperimentDesign& design) {
  const auto d2 = static_cast<Eigen::Index>(design.dim() * design.dim());
  const auto& states = design.initial_states().states;
  states_.resize(d2, static_cast<Eigen::Index>(states.size()));
  for (std::size_t s = 0; s < states.size(); ++s) states_.col(static_cast<Eigen::Index>(s)) = vectorize(states[s]);
  const auto& projs = design.projectors();
  projectors_adj_.resize(static_cast<Eigen::Index>(projs.size()), d2);
  for (std::size_t k = 0; k < projs.size(); ++k) {
    projectors_adj_.row(static_cast<Eigen::Index>(k)) = vectorize(projs[k]).adjoint();
  }
}

RMat ProbabilityMap::evaluate(const CMat& propagator) const {
  return (projectors_adj_ * (propagator * states_)).real();
}

namespace {

ProbabilityTensor probabilities_impl(const CMat& liouv, const ExperimentDesign& design, bool validate) {
  const ProbabilityMap map(design);
  ProbabilityTensor out(design.n_entries());
  const std::size_t d = design.dim();
  for (std::size_t i = 0; i < design.n_times(); ++i) {
    const CMat prop = expm(design.times()[i] * liouv);
    if (validate) {
      const CMat evolved = map.evolve(prop);
      for (Eigen::Index s = 0; s < evolved.cols(); ++s) {
        if (min_eigenvalue(devectorize(evolved.col(s), d)) < -kStateTol) {
          throw NotPsdError("propagated state has a negative eigenvalue");
        }
      }
    }
    const RMat probs = map.evaluate(prop);
    for (std::size_t s = 0; s < design.n_states(); ++s) {
      for (std::size_t b = 0; b < design.n_bases(); ++b) {
        for (std::size_t m = 0; m < d; ++m) {
          out[design.entry_index(s, i, b, m)] =
              probs(static_cast<Eigen::Index>(b * d + m), static_cast<Eigen::Index>(s));
        }
      }
    }
  }
  return out;
}

}  // namespace

ProbabilityTensor predicted_probabilities(const LindbladModel& model, const ExperimentDesign& design) {
  if (model.n_qubits() != design.n_qubits()) throw ValidationError("model and design qubit counts differ");
  return probabilities_impl(build_liouvillian(model), design, true);
}

ProbabilityTensor predicted_probabilities(const CMat& liouv, const ExperimentDesign& design) {
  const auto d2 = static_cast<Eigen::Index>(design.dim() * design.dim());
  if (liouv.rows() != d2 || liouv.cols() != d2) throw ValidationError("Liouvillian size does not match design");
  return probabilities_impl(liouv, design, false);
}

}  // namespace lqt
