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
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lqt/common.hpp"
#include "lqt/lindblad.hpp"
#include "lqt/pauli.hpp"
#include "lqt/quantum_objects.hpp"

namespace lqt {

/// Ideal gate generated by a constant Hamiltonian, U(t) = exp(-i H t).
struct TargetUnitary {
  enum class Kind { kIdentity, kRxHalfPi, kMsHalfPi, kCustom };

  Kind kind = Kind::kIdentity;
  CMat hamiltonian;
  /// Gate duration t_f - t_0; the named gates reach their target at t = duration.
  double duration = 1.0;

  static TargetUnitary identity(int n_qubits);
  /// H = pi/(4 T) sigma_x on one qubit.
  static TargetUnitary rx_half_pi(double duration = 1.0);
  /// H = pi/(4 T) sigma_x (x) sigma_x on two qubits.
  static TargetUnitary ms_half_pi(double duration = 1.0);
  static TargetUnitary custom(CMat hamiltonian, double duration = 1.0);
  /// Parses "identity", "rx_half_pi" or "ms_half_pi".
  static TargetUnitary named(const std::string& name, int n_qubits);

  std::string name() const;
  int n_qubits() const;
  CMat unitary(double t) const;
  CMat full() const { return unitary(duration); }
};

/// Hermitian coefficient matrix of size K = d^2 - 1 packed into K^2 reals:
/// diagonal first, then (Re, Im) of every p < q entry in row-major order.
class HermitianPacking {
 public:
  explicit HermitianPacking(std::size_t k = 0) : k_(k) {}

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return k_ * k_; }

  RVec pack(const CMat& g) const;
  CMat unpack(const RVec& x) const;
  /// Packs a gradient matrix R with dC/dx = <R, dG> such that dC = grad . dx.
  RVec pack_gradient(const CMat& r) const;
  /// Inverse of pack_gradient.
  CMat unpack_gradient(const RVec& grad) const;
  /// Position of Re G_pq (p < q); Im follows at +1.
  std::size_t offdiag_offset(std::size_t p, std::size_t q) const;

 private:
  std::size_t k_;
};

/// p = p_u + sum_pq Phi^{pq} G_pq over every design entry.
struct LinearizedModel {
  ExperimentDesign design;
  OperatorBasis basis;
  std::string target_name;
  CMat target_hamiltonian;
  double target_duration = 1.0;
  int quadrature_steps = 0;
  std::uint64_t hash = 0;

  RVec p_u;  // n_entries
  /// Row k holds Phi_k^{pq} at column p + q K.
  CMat phi;
  /// Real packed rows: p = p_u + a x with x = HermitianPacking::pack(G).
  RowMat a;

  std::size_t k() const noexcept { return basis.size(); }
  std::size_t n_entries() const noexcept { return static_cast<std::size_t>(p_u.size()); }
  HermitianPacking packing() const { return HermitianPacking(k()); }
  /// Phi_k as a K x K matrix indexed (p, q).
  CMat phi_matrix(std::size_t entry) const;
};

/// p^u: Tr{M U(t_i) rho_s U(t_i)^dag} for every design entry.
RVec unitary_baseline(const TargetUnitary& target, const ExperimentDesign& design);

/// Real-orthogonal Heisenberg frame matrix W_ab = Tr{E_a U E_b U^dag}/d over the full
/// Pauli basis (identity included), so W(0) is the identity.
RMat frame_matrix_full(const PauliBasis& paulis, const CMat& u);
/// Traceless block ((d^2-1) x (d^2-1)) of frame_matrix_full at time t.
CMat frame_matrix_W(double t, const TargetUnitary& target, const PauliBasis& paulis);

/// B^{pq}_{ab} over the full Pauli basis: the dissipator G_pq (B_p . B_q^dag - 1/2{B_q^dag B_p, .})
/// equals sum_ab B^{pq}_{ab} E_a . E_b. Returned as K^2 matrices of size d^2 x d^2, index p + q K.
std::vector<CMat> dissipator_coeffs_B(const OperatorBasis& basis, const PauliBasis& paulis);

struct LinearizeOptions {
  /// Initial number of Simpson panels (even, >= 8); doubled until stable.
  int quadrature_steps = 64;
  double quadrature_tol = 1e-8;
  int max_quadrature_steps = 8192;
  int max_qubits = 2;
};

/// Builds the linear model. Throws ConvergenceError if doubling the panels keeps changing
/// the integrated frame tensor by more than quadrature_tol.
LinearizedModel sensitivity_phi(const TargetUnitary& target, const ExperimentDesign& design,
                                const OperatorBasis& basis, const LinearizeOptions& options = {});

/// p_u + sum Phi^{pq} G_pq (real part; imaginary residue is below rounding for Hermitian G).
RVec linear_probability(const LinearizedModel& lin, const CMat& g);
/// Complex evaluation, used to check the Hermitian pairing.
CVec linear_probability_complex(const LinearizedModel& lin, const CMat& g);

/// Cache key over (design, target, basis, panels).
std::uint64_t linear_model_hash(const TargetUnitary& target, const ExperimentDesign& design,
                                const OperatorBasis& basis, int quadrature_steps);

/// Binary cache: magic "LQTLIN01", u64 header length, JSON header, then p_u and Phi
/// (interleaved re/im, row-major) as little-endian doubles.
void write_linear_model(const LinearizedModel& lin, const std::filesystem::path& path);
LinearizedModel read_linear_model(const std::filesystem::path& path);

/// Rebuilds the packed real rows from phi.
RowMat packed_rows(const CMat& phi, std::size_t k);

}  // namespace lqt
