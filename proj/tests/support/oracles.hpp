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

// Independent reference implementations used only by the tests. They share no
// code with the library beyond the basic Eigen types.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline CMat pauli(int digit) {
  CMat m(2, 2);
  switch (digit) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Dense Pauli word for index alpha, qubit 1 = most significant base-4 digit.
inline CMat pauli_word(std::size_t alpha, int n_qubits) {
  CMat out = CMat::Identity(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q) {
    const int digit = static_cast<int>((alpha >> (2 * q)) & 3U);
    out = kron(out, pauli(digit));
  }
  return out;
}

/// d rho / dt with G in the plain Pauli basis (B_p = E_{p+1}).
inline CMat lindblad_rhs(const CMat& h, const CMat& g, const std::vector<CMat>& ops, const CMat& rho) {
  const cplx i(0, 1);
  CMat out = -i * (h * rho - rho * h);
  for (std::size_t p = 0; p < ops.size(); ++p) {
    for (std::size_t q = 0; q < ops.size(); ++q) {
      const cplx gpq = g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (gpq == cplx(0, 0)) continue;
      const CMat bq_dag = ops[q].adjoint();
      const CMat anti = bq_dag * ops[p];
      out += gpq * (ops[p] * rho * bq_dag - 0.5 * (anti * rho + rho * anti));
    }
  }
  return out;
}

/// Classical fourth-order Runge-Kutta on the density matrix.
inline CMat rk4(const CMat& h, const CMat& g, const std::vector<CMat>& ops, CMat rho, double t, int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const CMat k1 = lindblad_rhs(h, g, ops, rho);
    const CMat k2 = lindblad_rhs(h, g, ops, rho + 0.5 * dt * k1);
    const CMat k3 = lindblad_rhs(h, g, ops, rho + 0.5 * dt * k2);
    const CMat k4 = lindblad_rhs(h, g, ops, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Traceless Pauli words of an n-qubit register, index 1..d^2-1.
inline std::vector<CMat> traceless_paulis(int n_qubits) {
  std::vector<CMat> out;
  const std::size_t n = std::size_t{1} << (2 * n_qubits);
  for (std::size_t a = 1; a < n; ++a) out.push_back(pauli_word(a, n_qubits));
  return out;
}

/// Truncated Taylor series, adequate for small norms.
inline CMat expm_taylor(const CMat& a, int terms = 40) {
  CMat out = CMat::Identity(a.rows(), a.cols());
  CMat term = out;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    out += term;
  }
  return out;
}

/// Random PSD matrix of the given trace (Wishart-like, independent of the library samplers).
inline CMat random_psd(std::size_t dim, double trace, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat x(dim, dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = cplx(n(rng), n(rng));
  CMat g = x * x.adjoint();
  return g * (trace / g.trace().real());
}

inline CMat random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat x(dim, dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = cplx(n(rng), n(rng));
  return 0.5 * (x + x.adjoint());
}

}  // namespace oracle
