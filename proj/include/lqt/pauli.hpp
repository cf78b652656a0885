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
#include <string>
#include <string_view>
#include <vector>

#include "lqt/common.hpp"

namespace lqt {

/// Exact unit phase i^k, k = 0..3.
enum class Phase : std::uint8_t { kOne = 0, kI = 1, kMinusOne = 2, kMinusI = 3 };

inline Phase operator*(Phase a, Phase b) {
  return static_cast<Phase>((static_cast<unsigned>(a) + static_cast<unsigned>(b)) & 3U);
}

inline cplx to_complex(Phase p) {
  switch (p) {
    case Phase::kOne: return {1.0, 0.0};
    case Phase::kI: return {0.0, 1.0};
    case Phase::kMinusOne: return {-1.0, 0.0};
    case Phase::kMinusI: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

struct PauliProduct {
  Phase phase;
  std::size_t index;
};

/// Unnormalized N-qubit Pauli basis {1, X, Y, Z}^{\otimes N}.
///
/// Element index alpha is read in base 4 with the most significant digit on
/// qubit 1 (digit 0 = identity, 1 = X, 2 = Y, 3 = Z), so E_0 is the identity and
/// Tr{E_a E_b} = d * delta_ab. Products are evaluated digit-wise with exact phases.
class PauliBasis {
 public:
  explicit PauliBasis(int n_qubits, int max_qubits = kDefaultMaxQubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Number of elements, d^2.
  std::size_t size() const noexcept { return elements_.size(); }

  const CMat& element(std::size_t alpha) const { return elements_.at(alpha); }
  const std::vector<CMat>& elements() const noexcept { return elements_; }

  /// E_a E_b = phase * E_index.
  PauliProduct product(std::size_t a, std::size_t b) const;

  /// Tr{E_alpha^dag E_delta^dag E_gamma}.
  cplx triple_trace(std::size_t alpha, std::size_t delta, std::size_t gamma) const;

  /// Per-qubit digits of an index, qubit 1 first.
  std::vector<int> digits(std::size_t alpha) const;
  /// Label such as "IX" or "ZZ".
  std::string label(std::size_t alpha) const;
  std::size_t index_of(std::string_view label) const;

  /// Coefficients Tr{E_alpha A}/d of an operator over the full basis.
  CVec decompose(const CMat& op) const;
  /// Sum_alpha coeffs[alpha] E_alpha; `coeffs` has d^2 entries.
  CMat compose(const CVec& coeffs) const;

 private:
  int n_qubits_;
  std::size_t dim_;
  std::vector<CMat> elements_;
};

/// Free-function spelling of the constructor.
PauliBasis build_pauli_basis(int n_qubits, int max_qubits = kDefaultMaxQubits);

/// Single-qubit Pauli matrix for digit 0..3.
CMat single_pauli(int digit);

/// Kronecker product of two dense complex matrices.
CMat kron(const CMat& a, const CMat& b);

}  // namespace lqt
