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

#include <filesystem>
#include <string>
#include <utility>

#include <json.hpp>

#include "lqt/common.hpp"
#include "lqt/diagnostics.hpp"
#include "lqt/estimators.hpp"
#include "lqt/experiment.hpp"
#include "lqt/lindblad.hpp"

namespace lqt {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

/// Nested [re, im] arrays, row by row.
ordered_json complex_matrix_to_json(const CMat& m);
CMat complex_matrix_from_json(const nlohmann::json& j);
ordered_json complex_vector_to_json(const CVec& v);

/// {format_version, n_qubits, basis: "pauli" | {coeffs}, c, G}.
ordered_json model_to_json(const LindbladModel& model);
/// Validates the document and the model invariants (Hermitian, PSD G).
LindbladModel model_from_json(const nlohmann::json& j);
void write_model(const LindbladModel& model, const std::filesystem::path& path);
LindbladModel read_model(const std::filesystem::path& path);

/// Run provenance attached to every output.
struct Provenance {
  std::string tool_version;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::uint64_t config_hash = 0;
  std::string command;
};

ordered_json provenance_to_json(const Provenance& p);
/// Lines of the form "# key: value" for CSV outputs.
std::string provenance_comment(const Provenance& p);

/// Deterministic result document (no wall-clock values).
ordered_json result_to_json(const EstimationResult& result, const Provenance& provenance,
                            const ordered_json& context = ordered_json::object());
/// Parses the fields needed to re-evaluate an estimate: method, G, c.
EstimationResult result_from_json(const nlohmann::json& j);
/// Wall-clock companion: total seconds, seconds per iteration, per-record elapsed time.
ordered_json timing_to_json(const EstimationResult& result);
/// `<dir>/<stem>.timing.json`
std::filesystem::path timing_sidecar_path(const std::filesystem::path& result_path);

ordered_json chi2_to_json(const ChiSquareReport& report);
ordered_json noise_summary_to_json(const NoiseSummary& summary);

/// Exact probabilities in counts-file layout with a `probability` column; the sidecar has N_sc = null.
void write_probabilities(const ProbabilityTensor& p, const ExperimentDesign& design, const std::filesystem::path& csv,
                         const std::string& extra_meta = "");
/// Reads either a counts file or a probability file (decided by the header) into frequencies.
std::pair<ExperimentDesign, FrequencyTensor> read_frequency_file(const std::filesystem::path& csv);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lqt
