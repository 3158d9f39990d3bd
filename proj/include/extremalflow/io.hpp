#pragma once

// Artifact writers. CSV numbers carry 17 significant digits; JSON numbers use
// the shortest representation that round-trips.

#include "extremalflow/classifier.hpp"
#include "extremalflow/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace extremalflow {

/// Columns: t,chart,L,S,E,lyapunov,Z,sgn_word,kappa_dev_P,kappa_dev_Q,
/// tangent_y_P,tangent_y_Q,dissipation,dist_lower,dist_upper,clearance.
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticSample>& samples);

/// Columns: sigma,category,t_event,final_sgn,blowup.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Writes snapshots_NNNN.csv (x,y) and diagnostics.csv into dir; returns the
/// snapshot file names in order.
std::vector<std::string> write_trajectory(const Trajectory& t, const std::filesystem::path& dir);

nlohmann::json config_json(const RunConfig& c);
nlohmann::json summary_json(const RunConfig& c, const Classification& result,
                            const std::vector<std::string>& snapshot_files);
nlohmann::json bracket_json(const RunConfig& c, const Bracket& b);

/// Pretty-printed JSON followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace extremalflow
