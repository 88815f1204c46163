#pragma once

#include <mmce/channel.hpp>
#include <mmce/harness.hpp>
#include <mmce/precondition.hpp>
#include <mmce/solver.hpp>
#include <mmce/sounding.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace mmce {

// JSON bindings (complex entries serialized as [re, im] pairs). The from_json
// side validates shapes and throws parameter_error on ragged or malformed
// payloads; missing config fields fall back to their defaults.

void to_json(nlohmann::json& j, const ChannelParams& p);
void from_json(const nlohmann::json& j, ChannelParams& p);

void to_json(nlohmann::json& j, const SoundingSetup& s);
void from_json(const nlohmann::json& j, SoundingSetup& s);

void to_json(nlohmann::json& j, const MeasurementSet& m);
void from_json(const nlohmann::json& j, MeasurementSet& m);

void to_json(nlohmann::json& j, const CoarseEstimate& c);
void from_json(const nlohmann::json& j, CoarseEstimate& c);

void to_json(nlohmann::json& j, const SolverOptions& o);
void from_json(const nlohmann::json& j, SolverOptions& o);

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Read a whole JSON document; errors carry the path.
nlohmann::json read_json_file(const std::string& path);

/// Write a document with 2-space indentation and a trailing newline.
void write_json_file(const nlohmann::json& j, const std::string& path);

/// Solver diagnostics as CSV with columns iteration, lambda, delta, residue,
/// G, S_opt, path_count, step_halvings.
void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

}  // namespace mmce
