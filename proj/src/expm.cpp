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

#include "lqt/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lqt {
namespace {

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                           2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double norm1(const CMat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Low-degree approximant from even powers: U = A * sum b_odd A^{2k}, V = sum b_even A^{2k}.
template <std::size_t N>
CMat pade_low(const CMat& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const CMat ident = CMat::Identity(n, n);
  const CMat a2 = a * a;
  CMat power = ident;
  CMat u_inner = CMat::Zero(n, n);
  CMat v = CMat::Zero(n, n);
  for (std::size_t k = 0; 2 * k + 1 < N; ++k) {
    u_inner += b[2 * k + 1] * power;
    v += b[2 * k] * power;
    power = power * a2;
  }
  const CMat u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

CMat pade13(const CMat& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const CMat ident = CMat::Identity(n, n);
  const CMat a2 = a * a;
  const CMat a4 = a2 * a2;
  const CMat a6 = a4 * a2;
  const CMat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const CMat u = a * u_inner;
  const CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMat expm(const CMat& a) {
  if (a.rows() != a.cols()) throw ValidationError("expm requires a square matrix");
  if (a.rows() == 0) return a;
  const double norm = norm1(a);
  if (norm == 0.0) return CMat::Identity(a.rows(), a.cols());
  if (!std::isfinite(norm)) throw ValidationError("expm input has non-finite entries");
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  CMat result = pade13(a * std::ldexp(1.0, -squarings));
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

CMat expm_frechet(const CMat& a, const CMat& e) {
  if (a.rows() != a.cols() || e.rows() != a.rows() || e.cols() != a.cols()) {
    throw ValidationError("expm_frechet requires square matrices of equal size");
  }
  const Eigen::Index n = a.rows();
  const double ne = norm1(e);
  if (ne == 0.0) return CMat::Zero(n, n);
  // The derivative is linear in E; keep E from inflating the block norm.
  const double scale = std::max(norm1(a), 1.0) / ne;
  CMat block = CMat::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.bottomRightCorner(n, n) = a;
  block.topRightCorner(n, n) = scale * e;
  return expm(block).topRightCorner(n, n) / scale;
}

CMat unitary_from_hamiltonian(const CMat& hamiltonian, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(hamiltonian);
  if (eig.info() != Eigen::Success) throw ConvergenceError("Hamiltonian eigendecomposition failed");
  const RVec& w = eig.eigenvalues();
  CVec phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(cplx(0.0, -w(k) * t));
  const CMat& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace lqt
