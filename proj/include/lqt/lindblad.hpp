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

#include <array>
#include <memory>
#include <random>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/pauli.hpp"
#include "lqt/quantum_objects.hpp"

namespace lqt {

/// Traceless operator basis B_p = sum_{alpha>=1} coeffs(p, alpha-1) E_alpha.
struct OperatorBasis {
  CMat coeffs;

  /// Identity coefficients: B_p = E_{p+1}.
  static OperatorBasis pauli(std::size_t n_ops);

  std::size_t size() const noexcept { return static_cast<std::size_t>(coeffs.rows()); }
  bool is_identity(double tol = 0.0) const;
  /// Throws ValidationError unless square and full rank.
  void validate() const;
  /// Dense B_p matrices.
  std::vector<CMat> operators(const PauliBasis& paulis) const;
};

/// Lindblad matrix expressed in the Pauli basis: G_P = b^T G b^*.
CMat to_pauli_matrix(const CMat& g, const OperatorBasis& basis);
/// Inverse of to_pauli_matrix.
CMat from_pauli_matrix(const CMat& g_pauli, const OperatorBasis& basis);

/// Hamiltonian coefficients c (real, d^2-1) and Lindblad matrix G in a declared operator basis.
class LindbladModel {
 public:
  LindbladModel(int n_qubits, RVec c, CMat g, OperatorBasis basis);
  LindbladModel(int n_qubits, RVec c, CMat g);

  int n_qubits() const noexcept { return paulis_->n_qubits(); }
  std::size_t dim() const noexcept { return paulis_->dim(); }
  const PauliBasis& paulis() const noexcept { return *paulis_; }
  std::shared_ptr<const PauliBasis> shared_paulis() const noexcept { return paulis_; }
  const RVec& c() const noexcept { return c_; }
  const CMat& g() const noexcept { return g_; }
  const OperatorBasis& basis() const noexcept { return basis_; }

  CMat hamiltonian() const;

 private:
  std::shared_ptr<const PauliBasis> paulis_;
  RVec c_;
  CMat g_;
  OperatorBasis basis_;
};

/// Column-stacking superoperator of -i[H, .] + sum_pq G_pq (B_p . B_q^dag - 1/2 {B_q^dag B_p, .}).
/// G only needs to be Hermitian here.
CMat liouvillian(const CMat& hamiltonian, const CMat& g, const std::vector<CMat>& ops);
/// Same generator from jump operators: sum_n (L_n . L_n^dag - 1/2 {L_n^dag L_n, .}).
CMat liouvillian_from_jumps(const CMat& hamiltonian, const std::vector<CMat>& jumps);
CMat build_liouvillian(const LindbladModel& model);

CVec vectorize(const CMat& rho);
CMat devectorize(const CVec& v, std::size_t dim);

/// exp(t L)(rho0). Throws NotPsdError if the result has an eigenvalue below -1e-6.
CMat propagate(const LindbladModel& model, const CMat& rho0, double t);

struct JumpDecomposition {
  std::vector<double> rates;          // descending, >= 0
  std::vector<CVec> coefficients;     // eigenvectors of G in the model's operator basis
  std::vector<CMat> jump_ops;         // dense L_n
};

/// Eigendecomposition of G; eigenvalues in [-1e-10, 0) are clipped, lower ones throw NotPsdError.
JumpDecomposition jump_decomposition(const LindbladModel& model);
JumpDecomposition jump_decomposition(const CMat& g, const OperatorBasis& basis, const PauliBasis& paulis);

/// Haar-random unitary from the phase-fixed QR of a complex Ginibre matrix.
CMat haar_unitary(std::size_t n, std::mt19937_64& rng);
/// Hilbert-Schmidt random PSD matrix with trace `trace_scale` (partial trace of a Haar-rotated reference vector).
CMat sample_hs_random_G(std::size_t dim, double trace_scale, std::mt19937_64& rng);
/// Haar-random rank-`rank` projector scaled to trace `trace_scale`.
CMat sample_projector_G(std::size_t dim, std::size_t rank, double trace_scale, std::mt19937_64& rng);

/// Rates of the five-channel two-qubit noise model.
struct StructuredRates {
  double dephasing_1 = 0.0;
  double dephasing_2 = 0.0;
  double damping_1 = 0.0;
  double damping_2 = 0.0;
  double bit_flip = 0.0;
};

/// Jump operators Z1, Z2, sigma_-1, sigma_-2, X1X2 in that order.
std::array<CMat, 5> structured_jump_operators();
/// Two-qubit model with H = 0 and Pauli-basis G assembled from the five channels.
LindbladModel structured_noise_G(const StructuredRates& rates);

/// Maps propagators to probabilities: p(b, m, s) = Tr{P_{b,m} E(rho_s)}.
class ProbabilityMap {
 public:
  explicit ProbabilityMap(const ExperimentDesign& design);
  /// Probabilities of every (basis, outcome) x state for one propagator; rows = basis*d + outcome.
  RMat evaluate(const CMat& propagator) const;
  /// Evolved states, one vectorized column per initial state.
  CMat evolve(const CMat& propagator) const { return propagator * states_; }

 private:
  CMat states_;          // d^2 x n_states
  CMat projectors_adj_;  // n_proj x d^2
};

/// Flat tensor over ExperimentDesign entries.
using ProbabilityTensor = std::vector<double>;

/// Exact probabilities for every configuration; throws NotPsdError for unphysical evolved states.
ProbabilityTensor predicted_probabilities(const LindbladModel& model, const ExperimentDesign& design);
/// Same without state validation, for arbitrary (possibly non-PSD) Hermitian generators.
ProbabilityTensor predicted_probabilities(const CMat& liouvillian, const ExperimentDesign& design);

/// Minimum eigenvalue of a Hermitian matrix (Hermitian part taken first).
double min_eigenvalue(const CMat& a);

}  // namespace lqt
