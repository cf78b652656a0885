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

#include "lqt/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lqt {

namespace {

using json = nlohmann::json;

constexpr const char* kProbabilityHeader = "state_id,time_index,basis,outcome,probability";
constexpr const char* kCountsHeader = "state_id,time_index,basis,outcome,count";

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::size_t parse_index(const std::string& s, const char* what, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(std::string("invalid ") + what + " '" + s + "'", line);
  }
  return v;
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json complex_matrix_to_json(const CMat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat complex_matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a nested [re, im] matrix", 0);
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  CMat m(rows, cols);
  try {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(j.at(r).size()) != cols) throw ParseError("ragged complex matrix", 0);
      for (Eigen::Index c = 0; c < cols; ++c) {
        const json& v = j.at(r).at(c);
        if (!v.is_array() || v.size() != 2) throw ParseError("matrix entries must be [re, im] pairs", 0);
        m(r, c) = {v.at(0).get<double>(), v.at(1).get<double>()};
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid complex matrix: ") + e.what(), 0);
  }
  return m;
}

ordered_json complex_vector_to_json(const CVec& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

ordered_json model_to_json(const LindbladModel& model) {
  ordered_json j;
  j["format_version"] = kModelFormatVersion;
  j["n_qubits"] = model.n_qubits();
  if (model.basis().is_identity()) {
    j["basis"] = "pauli";
  } else {
    j["basis"] = {{"coeffs", complex_matrix_to_json(model.basis().coeffs)}};
  }
  j["c"] = std::vector<double>(model.c().data(), model.c().data() + model.c().size());
  j["G"] = complex_matrix_to_json(model.g());
  return j;
}

LindbladModel model_from_json(const json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ParseError("unsupported model format_version " + std::to_string(version), 0);
    }
    const int n = j.at("n_qubits").get<int>();
    const auto c = j.at("c").get<std::vector<double>>();
    RVec cv = Eigen::Map<const RVec>(c.data(), static_cast<Eigen::Index>(c.size()));
    const CMat g = complex_matrix_from_json(j.at("G"));
    const json& b = j.at("basis");
    if (b.is_string()) {
      if (b.get<std::string>() != "pauli") throw ParseError("basis must be \"pauli\" or {coeffs}", 0);
      return LindbladModel(n, cv, g);
    }
    OperatorBasis basis{complex_matrix_from_json(b.at("coeffs"))};
    return LindbladModel(n, cv, g, basis);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model document: ") + e.what(), 0);
  }
}

void write_model(const LindbladModel& model, const std::filesystem::path& path) {
  write_text(path, model_to_json(model).dump(2) + "\n");
}

LindbladModel read_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

ordered_json provenance_to_json(const Provenance& p) {
  ordered_json j;
  j["tool_version"] = p.tool_version;
  if (p.has_seed) {
    j["seed"] = p.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["config_hash"] = hex64(p.config_hash);
  if (!p.command.empty()) j["command"] = p.command;
  return j;
}

std::string provenance_comment(const Provenance& p) {
  std::string out = "# tool_version: " + p.tool_version + "\n";
  out += "# seed: " + (p.has_seed ? std::to_string(p.seed) : std::string("none")) + "\n";
  out += "# config_hash: " + hex64(p.config_hash) + "\n";
  if (!p.command.empty()) out += "# command: " + p.command + "\n";
  return out;
}

ordered_json result_to_json(const EstimationResult& result, const Provenance& provenance, const ordered_json& context) {
  ordered_json j;
  j["provenance"] = provenance_to_json(provenance);
  j["method"] = method_name(result.method);
  ordered_json opts = ordered_json::object();
  for (const auto& [k, v] : result.options) opts[k] = v;
  j["options"] = opts;
  for (auto it = context.begin(); it != context.end(); ++it) j[it.key()] = it.value();
  j["G_hat"] = complex_matrix_to_json(result.g_hat);
  if (result.c_hat) {
    j["c_hat"] = std::vector<double>(result.c_hat->data(), result.c_hat->data() + result.c_hat->size());
  } else {
    j["c_hat"] = nullptr;
  }
  j["converged"] = result.converged;
  j["stop_reason"] = result.stop_reason;
  j["iterations"] = result.iterations;
  if (result.residual_norm) j["residual_norm"] = *result.residual_norm;
  if (result.residual_bound) j["residual_bound"] = *result.residual_bound;
  if (result.feasible) j["feasible"] = *result.feasible;
  ordered_json trace = ordered_json::array();
  for (const TraceRecord& r : result.trace.records) {
    ordered_json rec;
    rec["iteration"] = r.iteration;
    rec["cost"] = r.cost;
    rec["step"] = r.step;
    rec["grad_norm"] = r.grad_norm;
    rec["distance"] = std::isfinite(r.distance) ? ordered_json(r.distance) : ordered_json(nullptr);
    rec["relative_distance"] =
        std::isfinite(r.relative_distance) ? ordered_json(r.relative_distance) : ordered_json(nullptr);
    rec["chi2"] = std::isfinite(r.chi2) ? ordered_json(r.chi2) : ordered_json(nullptr);
    trace.push_back(std::move(rec));
  }
  j["trace"] = std::move(trace);
  return j;
}

EstimationResult result_from_json(const json& j) {
  EstimationResult r;
  try {
    r.method = parse_method(j.at("method").get<std::string>());
    r.g_hat = complex_matrix_from_json(j.at("G_hat"));
    if (j.contains("c_hat") && !j.at("c_hat").is_null()) {
      const auto c = j.at("c_hat").get<std::vector<double>>();
      r.c_hat = Eigen::Map<const RVec>(c.data(), static_cast<Eigen::Index>(c.size()));
    }
    r.converged = j.value("converged", false);
    r.stop_reason = j.value("stop_reason", std::string());
    r.iterations = j.value("iterations", 0);
    if (j.contains("trace")) {
      for (const json& rec : j.at("trace")) {
        TraceRecord t;
        t.iteration = rec.at("iteration").get<int>();
        t.cost = rec.at("cost").get<double>();
        t.step = rec.value("step", 0.0);
        t.grad_norm = rec.value("grad_norm", 0.0);
        auto opt = [&](const char* key) {
          return rec.contains(key) && rec.at(key).is_number() ? rec.at(key).get<double>()
                                                              : std::numeric_limits<double>::quiet_NaN();
        };
        t.distance = opt("distance");
        t.relative_distance = opt("relative_distance");
        t.chi2 = opt("chi2");
        r.trace.push(t);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid result document: ") + e.what(), 0);
  }
  return r;
}

ordered_json timing_to_json(const EstimationResult& result) {
  ordered_json j;
  j["method"] = method_name(result.method);
  j["seconds"] = result.seconds;
  j["iterations"] = result.iterations;
  j["seconds_per_iteration"] = result.seconds_per_iteration();
  ordered_json per = ordered_json::array();
  for (const TraceRecord& r : result.trace.records) per.push_back({r.iteration, r.elapsed_seconds});
  j["elapsed_by_iteration"] = std::move(per);
  return j;
}

std::filesystem::path timing_sidecar_path(const std::filesystem::path& result_path) {
  std::filesystem::path p = result_path;
  p.replace_extension(".timing.json");
  return p;
}

ordered_json chi2_to_json(const ChiSquareReport& report) {
  ordered_json j;
  j["chi2"] = report.chi2;
  j["sigma"] = report.sigma;
  j["dof"] = report.dof;
  j["n_terms"] = report.n_terms;
  j["n_groups"] = report.n_groups;
  j["min_expected_count"] = report.min_expected_count;
  j["valid"] = report.valid;
  j["capped"] = report.capped;
  return j;
}

ordered_json noise_summary_to_json(const NoiseSummary& summary) {
  ordered_json j;
  j["shot_noise_floor"] = summary.shot_noise_floor;
  ordered_json jumps = ordered_json::array();
  for (const JumpSummary& js : summary.jumps) {
    ordered_json o;
    o["rate"] = js.rate;
    o["inconclusive"] = js.inconclusive;
    ordered_json comps = ordered_json::object();
    for (std::size_t a = 0; a < js.labels.size(); ++a) {
      const cplx v = js.pauli_vector[static_cast<Eigen::Index>(a)];
      if (std::abs(v) < 1e-12) continue;
      comps[js.labels[a]] = {v.real(), v.imag()};
    }
    o["pauli_components"] = std::move(comps);
    jumps.push_back(std::move(o));
  }
  j["jumps"] = std::move(jumps);
  return j;
}

void write_probabilities(const ProbabilityTensor& p, const ExperimentDesign& design, const std::filesystem::path& csv,
                         const std::string& extra_meta) {
  if (p.size() != design.n_entries()) throw ValidationError("probabilities must cover the design");
  std::string body = std::string(kProbabilityHeader) + "\n";
  char buf[64];
  for (std::size_t k = 0; k < design.n_entries(); ++k) {
    const Configuration c = design.configuration(k);
    const auto res = std::to_chars(buf, buf + sizeof(buf), p[k]);
    body += std::to_string(c.state_id) + "," + std::to_string(c.time_index) + "," + c.basis + "," + c.outcome + "," +
            std::string(buf, res.ptr) + "\n";
  }
  write_text(csv, body);
  ordered_json meta;
  meta["n_qubits"] = design.n_qubits();
  meta["times"] = design.times();
  meta["N_sc"] = nullptr;
  if (!extra_meta.empty()) {
    const auto extra = ordered_json::parse(extra_meta);
    for (auto it = extra.begin(); it != extra.end(); ++it) {
      if (!meta.contains(it.key())) meta[it.key()] = it.value();
    }
  }
  write_text(counts_sidecar_path(csv), meta.dump(2) + "\n");
}

std::pair<ExperimentDesign, FrequencyTensor> read_frequency_file(const std::filesystem::path& csv) {
  const std::string text = read_text(csv);
  const std::string first = text.substr(0, text.find('\n'));
  if (first == kCountsHeader) {
    CountsTable counts = read_counts(csv);
    FrequencyTensor f = frequencies(counts);
    return {counts.design, std::move(f)};
  }
  if (first != kProbabilityHeader) {
    throw ParseError("expected a counts or probability header", 1);
  }
  const json meta = read_json_file(counts_sidecar_path(csv));
  ExperimentDesign design;
  try {
    design = ExperimentDesign(meta.at("n_qubits").get<int>(), meta.at("times").get<std::vector<double>>(), std::nullopt);
  } catch (const json::exception& e) {
    throw ParseError(counts_sidecar_path(csv).string() + ": " + e.what(), 0);
  }
  ProbabilityTensor p(design.n_entries(), 0.0);
  std::vector<bool> seen(design.n_entries(), false);
  std::vector<bool> group_seen(design.n_groups(), false);
  std::size_t pos = text.find('\n') + 1;
  std::size_t line_no = 1;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.back() == '\r') throw ParseError("CR line endings are not accepted", line_no);
    const auto fields = split_csv(line);
    if (fields.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    const std::size_t s = parse_index(fields[0], "state_id", line_no);
    const std::size_t i = parse_index(fields[1], "time_index", line_no);
    if (s >= design.n_states()) throw ParseError("state_id out of range", line_no);
    if (i >= design.n_times()) throw ParseError("time_index out of range", line_no);
    std::size_t b = 0, m = 0;
    try {
      b = design.basis_index(fields[2]);
      m = design.outcome_index(fields[3]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), v);
    if (ec != std::errc() || ptr != fields[4].data() + fields[4].size() || !std::isfinite(v)) {
      throw ParseError("invalid probability '" + fields[4] + "'", line_no);
    }
    const std::size_t k = design.entry_index(s, i, b, m);
    if (seen[k]) throw ParseError("duplicate row for this configuration", line_no);
    seen[k] = true;
    group_seen[design.group_of(k)] = true;
    p[k] = v;
  }
  FrequencyTensor f = exact_frequencies(p, design);
  for (std::size_t g = 0; g < design.n_groups(); ++g) {
    if (!group_seen[g]) f.group_shots[g] = 0.0;
  }
  return {design, std::move(f)};
}

}  // namespace lqt
