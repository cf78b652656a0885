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

#include "lqt/quantum_objects.hpp"

#include <cmath>

#include "lqt/pauli.hpp"

namespace lqt {
namespace {

CMat single_qubit_state(int which) {
  const double h = 0.5;
  CMat rho(2, 2);
  switch (which) {
    case 0: rho << 1, 0, 0, 0; break;                             // |0>
    case 1: rho << 0, 0, 0, 1; break;                             // |1>
    case 2: rho << h, h, h, h; break;                             // |+>
    case 3: rho << h, cplx(0, -h), cplx(0, h), h; break;          // |+i>
    default: throw ValidationError("single-qubit state index must be 0..3");
  }
  return rho;
}

int basis_digit(char b) {
  switch (b) {
    case 'x': case 'X': return 1;
    case 'y': case 'Y': return 2;
    case 'z': case 'Z': return 3;
    default: throw ValidationError(std::string("unknown basis character '") + b + "'");
  }
}

double outcome_sign(char m) {
  switch (m) {
    case '+': return 1.0;
    case '-': return -1.0;
    default: throw ValidationError(std::string("unknown outcome character '") + m + "'");
  }
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

StateSet standard_initial_states(int n_qubits, int max_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw SizeLimitError("n_qubits=" + std::to_string(n_qubits) + " outside guard");
  }
  StateSet set;
  set.n_qubits = n_qubits;
  const std::size_t count = ipow(4, n_qubits);
  set.states.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    CMat rho = CMat::Identity(1, 1);
    for (int q = n_qubits - 1; q >= 0; --q) {
      const int digit = static_cast<int>((s / ipow(4, q)) % 4);
      rho = kron(rho, single_qubit_state(digit));
    }
    set.states.push_back(std::move(rho));
  }
  return set;
}

CMat projector(const MeasurementSetting& setting) {
  if (setting.basis.empty() || setting.basis.size() != setting.outcome.size()) {
    throw ValidationError("basis and outcome words must be non-empty and of equal length");
  }
  CMat p = CMat::Identity(1, 1);
  for (std::size_t q = 0; q < setting.basis.size(); ++q) {
    const CMat local = 0.5 * (CMat::Identity(2, 2) +
                              outcome_sign(setting.outcome[q]) * single_pauli(basis_digit(setting.basis[q])));
    p = kron(p, local);
  }
  return p;
}

ExperimentDesign::ExperimentDesign(int n_qubits, std::vector<double> times,
                                   std::optional<std::uint64_t> shots_per_setting, int max_qubits)
    : n_qubits_(n_qubits), times_(std::move(times)), shots_(shots_per_setting) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw SizeLimitError("n_qubits=" + std::to_string(n_qubits) + " outside guard");
  }
  if (times_.empty()) throw ValidationError("design needs at least one evolution time");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= 0.0) || !std::isfinite(times_[i])) throw ValidationError("evolution times must be finite and >= 0");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw ValidationError("evolution times must be strictly increasing");
  }
  if (shots_ && *shots_ == 0) throw ValidationError("shots_per_setting must be positive");
  n_bases_ = ipow(3, n_qubits);
  states_ = standard_initial_states(n_qubits, max_qubits);
  projectors_.reserve(n_bases_ * dim());
  for (std::size_t b = 0; b < n_bases_; ++b) {
    for (std::size_t m = 0; m < dim(); ++m) {
      projectors_.push_back(projector({basis_word(b), outcome_word(m)}));
    }
  }
}

std::size_t ExperimentDesign::group_index(std::size_t state, std::size_t time_index, std::size_t basis) const {
  if (state >= n_states() || time_index >= n_times() || basis >= n_bases_) {
    throw ValidationError("configuration index out of range");
  }
  return (time_index * n_states() + state) * n_bases_ + basis;
}

std::size_t ExperimentDesign::entry_index(std::size_t state, std::size_t time_index, std::size_t basis,
                                          std::size_t outcome) const {
  if (outcome >= dim()) throw ValidationError("outcome index out of range");
  return group_index(state, time_index, basis) * dim() + outcome;
}

std::string ExperimentDesign::basis_word(std::size_t basis) const {
  static constexpr char kChars[3] = {'x', 'y', 'z'};
  std::string w(static_cast<std::size_t>(n_qubits_), 'x');
  for (int q = n_qubits_ - 1; q >= 0; --q) {
    w[static_cast<std::size_t>(q)] = kChars[basis % 3];
    basis /= 3;
  }
  return w;
}

std::string ExperimentDesign::outcome_word(std::size_t outcome) const {
  std::string w(static_cast<std::size_t>(n_qubits_), '+');
  for (int q = n_qubits_ - 1; q >= 0; --q) {
    w[static_cast<std::size_t>(q)] = (outcome & 1U) ? '-' : '+';
    outcome >>= 1;
  }
  return w;
}

std::size_t ExperimentDesign::basis_index(const std::string& word) const {
  if (word.size() != static_cast<std::size_t>(n_qubits_)) throw ValidationError("basis word has wrong length");
  std::size_t idx = 0;
  for (char c : word) idx = idx * 3 + static_cast<std::size_t>(basis_digit(c) - 1);
  return idx;
}

std::size_t ExperimentDesign::outcome_index(const std::string& word) const {
  if (word.size() != static_cast<std::size_t>(n_qubits_)) throw ValidationError("outcome word has wrong length");
  std::size_t idx = 0;
  for (char c : word) idx = idx * 2 + (outcome_sign(c) < 0 ? 1U : 0U);
  return idx;
}

Configuration ExperimentDesign::configuration(std::size_t entry) const {
  if (entry >= n_entries()) throw ValidationError("entry index out of range");
  const std::size_t m = entry % dim();
  std::size_t g = entry / dim();
  const std::size_t b = g % n_bases_;
  g /= n_bases_;
  const std::size_t s = g % n_states();
  const std::size_t i = g / n_states();
  return {s, i, basis_word(b), outcome_word(m), m != dim() - 1};
}

std::vector<Configuration> ExperimentDesign::configurations() const {
  std::vector<Configuration> out;
  out.reserve(n_entries());
  for (std::size_t k = 0; k < n_entries(); ++k) out.push_back(configuration(k));
  return out;
}

std::vector<std::size_t> ExperimentDesign::independent_entries() const {
  std::vector<std::size_t> out;
  out.reserve(n_groups() * (dim() - 1));
  for (std::size_t k = 0; k < n_entries(); ++k) {
    if (outcome_of(k) != dim() - 1) out.push_back(k);
  }
  return out;
}

ExperimentDesign enumerate_configurations(int n_qubits, std::vector<double> times,
                                          std::optional<std::uint64_t> shots_per_setting, int max_qubits) {
  return ExperimentDesign(n_qubits, std::move(times), shots_per_setting, max_qubits);
}

}  // namespace lqt
