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

#include "lqt/pauli.hpp"

#include <cctype>

namespace lqt {
namespace {

constexpr char kLabels[4] = {'I', 'X', 'Y', 'Z'};

PauliProduct single_product(int a, int b) {
  if (a == 0) return {Phase::kOne, static_cast<std::size_t>(b)};
  if (b == 0 || a == b) return {Phase::kOne, static_cast<std::size_t>(a == b ? 0 : a)};
  const int c = 6 - a - b;
  const bool cyclic = (b - a + 3) % 3 == 1;
  return {cyclic ? Phase::kI : Phase::kMinusI, static_cast<std::size_t>(c)};
}

}  // namespace

CMat single_pauli(int digit) {
  CMat m = CMat::Zero(2, 2);
  switch (digit) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw ValidationError("Pauli digit must be 0..3");
  }
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

PauliBasis::PauliBasis(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw SizeLimitError("n_qubits=" + std::to_string(n_qubits) + " outside [1, " +
                         std::to_string(max_qubits) + "]");
  }
  dim_ = std::size_t{1} << n_qubits;
  const std::size_t count = dim_ * dim_;
  elements_.reserve(count);
  for (std::size_t alpha = 0; alpha < count; ++alpha) {
    CMat m = CMat::Identity(1, 1);
    for (int digit : digits(alpha)) m = kron(m, single_pauli(digit));
    elements_.push_back(std::move(m));
  }
}

std::vector<int> PauliBasis::digits(std::size_t alpha) const {
  std::vector<int> out(static_cast<std::size_t>(n_qubits_));
  for (int q = n_qubits_ - 1; q >= 0; --q) {
    out[static_cast<std::size_t>(q)] = static_cast<int>(alpha & 3U);
    alpha >>= 2;
  }
  return out;
}

PauliProduct PauliBasis::product(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw ValidationError("Pauli index out of range");
  Phase phase = Phase::kOne;
  std::size_t index = 0;
  const auto da = digits(a);
  const auto db = digits(b);
  for (std::size_t q = 0; q < da.size(); ++q) {
    const PauliProduct p = single_product(da[q], db[q]);
    phase = phase * p.phase;
    index = index * 4 + p.index;
  }
  return {phase, index};
}

cplx PauliBasis::triple_trace(std::size_t alpha, std::size_t delta, std::size_t gamma) const {
  // Every element is Hermitian, so the daggers drop out.
  const PauliProduct first = product(alpha, delta);
  const PauliProduct second = product(first.index, gamma);
  if (second.index != 0) return {0.0, 0.0};
  return to_complex(first.phase * second.phase) * static_cast<double>(dim_);
}

std::string PauliBasis::label(std::size_t alpha) const {
  std::string s;
  for (int digit : digits(alpha)) s.push_back(kLabels[digit]);
  return s;
}

std::size_t PauliBasis::index_of(std::string_view label) const {
  if (label.size() != static_cast<std::size_t>(n_qubits_)) {
    throw ValidationError("Pauli label length does not match n_qubits");
  }
  std::size_t index = 0;
  for (char ch : label) {
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    int digit = -1;
    for (int k = 0; k < 4; ++k) {
      if (kLabels[k] == up) digit = k;
    }
    if (digit < 0) throw ValidationError(std::string("unknown Pauli label character '") + ch + "'");
    index = index * 4 + static_cast<std::size_t>(digit);
  }
  return index;
}

CVec PauliBasis::decompose(const CMat& op) const {
  CVec out(static_cast<Eigen::Index>(size()));
  for (std::size_t a = 0; a < size(); ++a) {
    out(static_cast<Eigen::Index>(a)) = (elements_[a] * op).trace() / static_cast<double>(dim_);
  }
  return out;
}

CMat PauliBasis::compose(const CVec& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != size()) {
    throw ValidationError("coefficient vector must have d^2 entries");
  }
  CMat out = CMat::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t a = 0; a < size(); ++a) out += coeffs(static_cast<Eigen::Index>(a)) * elements_[a];
  return out;
}

PauliBasis build_pauli_basis(int n_qubits, int max_qubits) { return PauliBasis(n_qubits, max_qubits); }

}  // namespace lqt
