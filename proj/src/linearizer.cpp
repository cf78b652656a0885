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

#include "lqt/linearizer.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "lqt/expm.hpp"
#include "lqt/serialization.hpp"

namespace lqt {

namespace {

using json = nlohmann::json;

constexpr char kCacheMagic[8] = {'L', 'Q', 'T', 'L', 'I', 'N', '0', '1'};

int qubits_of_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw ValidationError("Hamiltonian dimension is not a power of two");
  return n;
}

// Integral over [0, t] of kron(W, W) by composite Simpson with `panels` panels.
RMat integrate_frame(const PauliBasis& paulis, const CMat& h, double t, int panels) {
  const auto n = static_cast<Eigen::Index>(paulis.size());
  RMat q = RMat::Zero(n * n, n * n);
  if (t == 0.0) return q;
  const double step = t / panels;
  for (int j = 0; j <= panels; ++j) {
    double w = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    w *= step / 3.0;
    const RMat wm = frame_matrix_full(paulis, unitary_from_hamiltonian(h, j * step));
    // kron(W, W)(a n + b, c n + e) = W(a, c) W(b, e)
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index c = 0; c < n; ++c) {
        const double wac = w * wm(a, c);
        if (wac == 0.0) continue;
        q.block(a * n, c * n, n, n).noalias() += wac * wm;
      }
    }
  }
  return q;
}

}  // namespace

TargetUnitary TargetUnitary::identity(int n_qubits) {
  const auto d = Eigen::Index{1} << n_qubits;
  return {Kind::kIdentity, CMat::Zero(d, d), 1.0};
}

TargetUnitary TargetUnitary::rx_half_pi(double duration) {
  if (!(duration > 0.0)) throw ValidationError("gate duration must be positive");
  return {Kind::kRxHalfPi, (std::numbers::pi / (4.0 * duration)) * single_pauli(1), duration};
}

TargetUnitary TargetUnitary::ms_half_pi(double duration) {
  if (!(duration > 0.0)) throw ValidationError("gate duration must be positive");
  const CMat x = single_pauli(1);
  return {Kind::kMsHalfPi, (std::numbers::pi / (4.0 * duration)) * kron(x, x), duration};
}

TargetUnitary TargetUnitary::custom(CMat hamiltonian, double duration) {
  if (hamiltonian.rows() != hamiltonian.cols()) throw ValidationError("Hamiltonian must be square");
  qubits_of_dim(hamiltonian.rows());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("Hamiltonian must be Hermitian");
  }
  return {Kind::kCustom, hermitian_part(hamiltonian), duration};
}

TargetUnitary TargetUnitary::named(const std::string& name, int n_qubits) {
  if (name == "identity") return identity(n_qubits);
  if (name == "rx_half_pi") {
    if (n_qubits != 1) throw ValidationError("rx_half_pi acts on one qubit");
    return rx_half_pi();
  }
  if (name == "ms_half_pi") {
    if (n_qubits != 2) throw ValidationError("ms_half_pi acts on two qubits");
    return ms_half_pi();
  }
  throw ValidationError("unknown target unitary '" + name + "'");
}

std::string TargetUnitary::name() const {
  switch (kind) {
    case Kind::kIdentity: return "identity";
    case Kind::kRxHalfPi: return "rx_half_pi";
    case Kind::kMsHalfPi: return "ms_half_pi";
    case Kind::kCustom: return "custom";
  }
  return "custom";
}

int TargetUnitary::n_qubits() const { return qubits_of_dim(hamiltonian.rows()); }

CMat TargetUnitary::unitary(double t) const { return unitary_from_hamiltonian(hamiltonian, t); }

// ---------------------------------------------------------------------------

std::size_t HermitianPacking::offdiag_offset(std::size_t p, std::size_t q) const {
  return k_ + 2 * (p * (2 * k_ - p - 1) / 2 + (q - p - 1));
}

RVec HermitianPacking::pack(const CMat& g) const {
  RVec x(static_cast<Eigen::Index>(size()));
  std::size_t pos = 0;
  for (std::size_t p = 0; p < k_; ++p) x[pos++] = g(p, p).real();
  for (std::size_t p = 0; p < k_; ++p) {
    for (std::size_t q = p + 1; q < k_; ++q) {
      x[pos++] = g(p, q).real();
      x[pos++] = g(p, q).imag();
    }
  }
  return x;
}

CMat HermitianPacking::unpack(const RVec& x) const {
  CMat g(k_, k_);
  std::size_t pos = 0;
  for (std::size_t p = 0; p < k_; ++p) g(p, p) = x[pos++];
  for (std::size_t p = 0; p < k_; ++p) {
    for (std::size_t q = p + 1; q < k_; ++q) {
      g(p, q) = {x[pos], x[pos + 1]};
      g(q, p) = {x[pos], -x[pos + 1]};
      pos += 2;
    }
  }
  return g;
}

RVec HermitianPacking::pack_gradient(const CMat& r) const {
  RVec x(static_cast<Eigen::Index>(size()));
  std::size_t pos = 0;
  for (std::size_t p = 0; p < k_; ++p) x[pos++] = r(p, p).real();
  for (std::size_t p = 0; p < k_; ++p) {
    for (std::size_t q = p + 1; q < k_; ++q) {
      x[pos++] = 2.0 * r(p, q).real();
      x[pos++] = 2.0 * r(p, q).imag();
    }
  }
  return x;
}

CMat HermitianPacking::unpack_gradient(const RVec& grad) const {
  CMat r(k_, k_);
  std::size_t pos = 0;
  for (std::size_t p = 0; p < k_; ++p) r(p, p) = grad[pos++];
  for (std::size_t p = 0; p < k_; ++p) {
    for (std::size_t q = p + 1; q < k_; ++q) {
      r(p, q) = 0.5 * cplx(grad[pos], grad[pos + 1]);
      r(q, p) = std::conj(r(p, q));
      pos += 2;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

CMat LinearizedModel::phi_matrix(std::size_t entry) const {
  const auto kk = static_cast<Eigen::Index>(k());
  CMat m(kk, kk);
  for (Eigen::Index q = 0; q < kk; ++q) {
    for (Eigen::Index p = 0; p < kk; ++p) m(p, q) = phi(static_cast<Eigen::Index>(entry), p + q * kk);
  }
  return m;
}

RVec unitary_baseline(const TargetUnitary& target, const ExperimentDesign& design) {
  if (static_cast<std::size_t>(target.hamiltonian.rows()) != design.dim()) {
    throw ValidationError("target unitary and design dimensions differ");
  }
  const std::size_t d = design.dim();
  RVec p(static_cast<Eigen::Index>(design.n_entries()));
  const auto& states = design.initial_states().states;
  const auto& projectors = design.projectors();
  for (std::size_t i = 0; i < design.n_times(); ++i) {
    const CMat u = target.unitary(design.times()[i]);
    for (std::size_t s = 0; s < design.n_states(); ++s) {
      const CMat rho = u * states[s] * u.adjoint();
      for (std::size_t b = 0; b < design.n_bases(); ++b) {
        for (std::size_t m = 0; m < d; ++m) {
          const CMat& proj = projectors[b * d + m];
          p[static_cast<Eigen::Index>(design.entry_index(s, i, b, m))] = (proj * rho).trace().real();
        }
      }
    }
  }
  return p;
}

RMat frame_matrix_full(const PauliBasis& paulis, const CMat& u) {
  const std::size_t n = paulis.size();
  RMat w(n, n);
  for (std::size_t b = 0; b < n; ++b) {
    const CMat rotated = u * paulis.element(b) * u.adjoint();
    const CVec coeffs = paulis.decompose(rotated);  // Tr{E_a X}/d
    for (std::size_t a = 0; a < n; ++a) w(a, b) = coeffs[a].real();
  }
  return w;
}

CMat frame_matrix_W(double t, const TargetUnitary& target, const PauliBasis& paulis) {
  const RMat full = frame_matrix_full(paulis, target.unitary(t));
  const auto k = full.rows() - 1;
  return full.bottomRightCorner(k, k).cast<cplx>();
}

std::vector<CMat> dissipator_coeffs_B(const OperatorBasis& basis, const PauliBasis& paulis) {
  basis.validate();
  const std::size_t n = paulis.size();
  const std::size_t k = basis.size();
  if (k + 1 != n) throw ValidationError("operator basis size does not match d^2 - 1");
  const std::vector<CMat> ops = basis.operators(paulis);
  std::vector<CMat> out(k * k);
  for (std::size_t q = 0; q < k; ++q) {
    for (std::size_t p = 0; p < k; ++p) {
      CMat b = CMat::Zero(n, n);
      for (std::size_t a = 1; a < n; ++a) {
        for (std::size_t c = 1; c < n; ++c) b(a, c) = basis.coeffs(p, a - 1) * std::conj(basis.coeffs(q, c - 1));
      }
      const CVec anti = paulis.decompose(ops[q].adjoint() * ops[p]);
      for (std::size_t a = 0; a < n; ++a) {
        b(a, 0) -= 0.5 * anti[a];
        b(0, a) -= 0.5 * anti[a];
      }
      out[p + q * k] = std::move(b);
    }
  }
  return out;
}

LinearizedModel sensitivity_phi(const TargetUnitary& target, const ExperimentDesign& design,
                                const OperatorBasis& basis, const LinearizeOptions& options) {
  if (design.n_qubits() > options.max_qubits) {
    throw SizeLimitError("linearization is limited to " + std::to_string(options.max_qubits) + " qubits");
  }
  if (static_cast<std::size_t>(target.hamiltonian.rows()) != design.dim()) {
    throw ValidationError("target unitary and design dimensions differ");
  }
  if (options.quadrature_steps < 8 || options.quadrature_steps % 2 != 0) {
    throw ValidationError("quadrature_steps must be even and at least 8");
  }
  const PauliBasis paulis(design.n_qubits(), options.max_qubits);
  const std::size_t d = design.dim();
  const std::size_t n = paulis.size();
  const std::size_t k = n - 1;
  const auto nn = static_cast<Eigen::Index>(n * n);

  // Row p + q K of bmat is vec(B^{pq}) (column-major).
  const std::vector<CMat> bcoef = dissipator_coeffs_B(basis, paulis);
  CMat bmat(static_cast<Eigen::Index>(k * k), nn);
  for (std::size_t j = 0; j < k * k; ++j) {
    bmat.row(static_cast<Eigen::Index>(j)) = Eigen::Map<const CVec>(bcoef[j].data(), nn).transpose();
  }

  // Per state: columns vec(rho E_delta).
  const auto& states = design.initial_states().states;
  std::vector<CMat> state_cols(design.n_states());
  for (std::size_t s = 0; s < design.n_states(); ++s) {
    CMat cols(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(n));
    for (std::size_t e = 0; e < n; ++e) {
      const CMat c = states[s] * paulis.element(e);
      cols.col(static_cast<Eigen::Index>(e)) = Eigen::Map<const CVec>(c.data(), static_cast<Eigen::Index>(d * d));
    }
    state_cols[s] = std::move(cols);
  }

  LinearizedModel lin;
  lin.design = design;
  lin.basis = basis;
  lin.target_name = target.name();
  lin.target_hamiltonian = target.hamiltonian;
  lin.target_duration = target.duration;
  lin.p_u = unitary_baseline(target, design);
  lin.phi.resize(static_cast<Eigen::Index>(design.n_entries()), static_cast<Eigen::Index>(k * k));

  const auto& projectors = design.projectors();
  const std::size_t per_time = design.n_states() * design.n_bases() * d;
  int panels_used = options.quadrature_steps;

  for (std::size_t i = 0; i < design.n_times(); ++i) {
    const double t = design.times()[i];
    int panels = options.quadrature_steps;
    RMat q = integrate_frame(paulis, target.hamiltonian, t, panels);
    while (true) {
      if (panels * 2 > options.max_quadrature_steps) {
        throw ConvergenceError("frame integral did not converge within " +
                               std::to_string(options.max_quadrature_steps) + " panels");
      }
      RMat q2 = integrate_frame(paulis, target.hamiltonian, t, panels * 2);
      const double change = (q2 - q).cwiseAbs().maxCoeff();
      panels *= 2;
      q = std::move(q2);
      if (change <= options.quadrature_tol) break;
    }
    panels_used = std::max(panels_used, panels);

    const CMat xmat = bmat * q.cast<cplx>();  // rows vec(Xbar^{pq})^T

    const CMat u = target.unitary(t);
    CMat tmat(static_cast<Eigen::Index>(per_time), nn);
    for (std::size_t b = 0; b < design.n_bases(); ++b) {
      for (std::size_t m = 0; m < d; ++m) {
        const CMat mt = u.adjoint() * projectors[b * d + m] * u;
        // Row gamma holds (M~ E_gamma)^T flattened, so rows x state columns gives traces.
        CMat arows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d * d));
        for (std::size_t g = 0; g < n; ++g) {
          const CMat a = (mt * paulis.element(g)).transpose();
          arows.row(static_cast<Eigen::Index>(g)) =
              Eigen::Map<const CVec>(a.data(), static_cast<Eigen::Index>(d * d)).transpose();
        }
        for (std::size_t s = 0; s < design.n_states(); ++s) {
          const CMat tk = arows * state_cols[s];  // (gamma, delta)
          const std::size_t row = design.entry_index(s, i, b, m) - i * per_time;
          tmat.row(static_cast<Eigen::Index>(row)) = Eigen::Map<const CVec>(tk.data(), nn).transpose();
        }
      }
    }
    lin.phi.middleRows(static_cast<Eigen::Index>(i * per_time), static_cast<Eigen::Index>(per_time)) =
        tmat * xmat.transpose();
  }

  lin.quadrature_steps = panels_used;
  lin.hash = linear_model_hash(target, design, basis, options.quadrature_steps);
  lin.a = packed_rows(lin.phi, k);
  return lin;
}

RowMat packed_rows(const CMat& phi, std::size_t k) {
  const HermitianPacking packing(k);
  RowMat a(phi.rows(), static_cast<Eigen::Index>(k * k));
  const auto kk = static_cast<Eigen::Index>(k);
  for (Eigen::Index r = 0; r < phi.rows(); ++r) {
    Eigen::Index pos = 0;
    for (Eigen::Index p = 0; p < kk; ++p) a(r, pos++) = phi(r, p + p * kk).real();
    for (Eigen::Index p = 0; p < kk; ++p) {
      for (Eigen::Index q = p + 1; q < kk; ++q) {
        const cplx v = phi(r, p + q * kk);
        a(r, pos++) = 2.0 * v.real();
        a(r, pos++) = -2.0 * v.imag();
      }
    }
  }
  return a;
}

CVec linear_probability_complex(const LinearizedModel& lin, const CMat& g) {
  const auto k = static_cast<Eigen::Index>(lin.k());
  if (g.rows() != k || g.cols() != k) throw ValidationError("G does not match the linear model's basis size");
  const Eigen::Map<const CVec> vg(g.data(), k * k);
  return lin.p_u.cast<cplx>() + lin.phi * vg;
}

RVec linear_probability(const LinearizedModel& lin, const CMat& g) {
  return linear_probability_complex(lin, g).real();
}

std::uint64_t linear_model_hash(const TargetUnitary& target, const ExperimentDesign& design,
                                const OperatorBasis& basis, int quadrature_steps) {
  std::ostringstream os;
  os << std::hexfloat << "n=" << design.n_qubits() << ";t=";
  for (double t : design.times()) os << t << ',';
  os << ";H=";
  for (Eigen::Index j = 0; j < target.hamiltonian.size(); ++j) {
    os << target.hamiltonian.data()[j].real() << ',' << target.hamiltonian.data()[j].imag() << ',';
  }
  os << ";T=" << target.duration << ";B=";
  for (Eigen::Index j = 0; j < basis.coeffs.size(); ++j) {
    os << basis.coeffs.data()[j].real() << ',' << basis.coeffs.data()[j].imag() << ',';
  }
  os << ";M=" << quadrature_steps;
  return fnv1a(os.str());
}

void write_linear_model(const LinearizedModel& lin, const std::filesystem::path& path) {
  ordered_json header;
  header["format"] = "LQTLIN01";
  header["n_qubits"] = lin.design.n_qubits();
  header["times"] = lin.design.times();
  if (lin.design.shots_per_setting()) {
    header["N_sc"] = *lin.design.shots_per_setting();
  } else {
    header["N_sc"] = nullptr;
  }
  header["target"] = lin.target_name;
  header["hamiltonian"] = complex_matrix_to_json(lin.target_hamiltonian);
  header["duration"] = lin.target_duration;
  header["basis"] = complex_matrix_to_json(lin.basis.coeffs);
  header["quadrature_steps"] = lin.quadrature_steps;
  header["hash"] = lin.hash;
  header["n_entries"] = lin.n_entries();
  header["k"] = lin.k();
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(kCacheMagic, sizeof(kCacheMagic));
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(lin.p_u.data()), static_cast<std::streamsize>(sizeof(double) * lin.p_u.size()));
  for (Eigen::Index r = 0; r < lin.phi.rows(); ++r) {
    for (Eigen::Index c = 0; c < lin.phi.cols(); ++c) {
      const double v[2] = {lin.phi(r, c).real(), lin.phi(r, c).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof(v));
    }
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

LinearizedModel read_linear_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) throw ParseError("not a linear-model cache file", 0);
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len > (std::uint64_t{1} << 30)) throw ParseError("corrupt cache header", 0);
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("cache header: ") + e.what(), 0);
  }
  LinearizedModel lin;
  std::optional<std::uint64_t> shots;
  if (!header.at("N_sc").is_null()) shots = header.at("N_sc").get<std::uint64_t>();
  lin.design = ExperimentDesign(header.at("n_qubits").get<int>(), header.at("times").get<std::vector<double>>(), shots);
  lin.target_name = header.at("target").get<std::string>();
  lin.target_hamiltonian = complex_matrix_from_json(header.at("hamiltonian"));
  lin.target_duration = header.at("duration").get<double>();
  lin.basis.coeffs = complex_matrix_from_json(header.at("basis"));
  lin.quadrature_steps = header.at("quadrature_steps").get<int>();
  lin.hash = header.at("hash").get<std::uint64_t>();
  const auto entries = header.at("n_entries").get<Eigen::Index>();
  const auto k = header.at("k").get<Eigen::Index>();
  if (entries != static_cast<Eigen::Index>(lin.design.n_entries()) || k != static_cast<Eigen::Index>(lin.basis.size())) {
    throw ParseError("cache header sizes are inconsistent", 0);
  }
  lin.p_u.resize(entries);
  in.read(reinterpret_cast<char*>(lin.p_u.data()), static_cast<std::streamsize>(sizeof(double) * entries));
  lin.phi.resize(entries, k * k);
  for (Eigen::Index r = 0; r < entries; ++r) {
    for (Eigen::Index c = 0; c < k * k; ++c) {
      double v[2];
      in.read(reinterpret_cast<char*>(v), sizeof(v));
      lin.phi(r, c) = {v[0], v[1]};
    }
  }
  if (!in) throw ParseError("truncated linear-model cache", 0);
  lin.a = packed_rows(lin.phi, static_cast<std::size_t>(k));
  return lin;
}

}  // namespace lqt
