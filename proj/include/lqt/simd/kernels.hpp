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

#include <cstddef>
#include <string_view>

namespace lqt::simd {

/// Instruction-set variants of the dense real kernels.
enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// Real double-precision kernels used by the linearized model.
///
/// Matrices are row-major with leading dimension `ld` (>= cols). Every variant
/// must agree with the scalar reference to rounding (summation order differs).
struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y[r] = sum_c A[r, c] x[c]
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, std::size_t ld, const double* x, double* y);
  /// y[c] += sum_r w[r] A[r, c]
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, std::size_t ld, const double* w, double* y);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks the instructions.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best table for this CPU, chosen once. The environment variable LQT_SIMD=scalar
/// forces the reference path.
const KernelTable& active_kernels();

}  // namespace lqt::simd
