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

#include "lqt/common.hpp"

namespace lqt {

/// Dense matrix exponential by scaling and squaring with diagonal Pade
/// approximants of degree 3, 5, 7, 9 or 13, chosen from the 1-norm
/// (Higham 2005 backward-error thresholds, double precision).
CMat expm(const CMat& a);

/// Frechet derivative of expm at A in direction E, from the upper-right block of
/// expm([[A, E], [0, A]]).
CMat expm_frechet(const CMat& a, const CMat& e);

/// exp(-i H t) for Hermitian H via its eigendecomposition.
CMat unitary_from_hamiltonian(const CMat& hamiltonian, double t);

}  // namespace lqt
