#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nsdyn/catalog.hpp"
#include "nsdyn/counterexample.hpp"
#include "nsdyn/engine.hpp"
#include "nsdyn/flow.hpp"
#include "nsdyn/prober.hpp"

namespace nsdyn {

// Every emitter here is deterministic: JSON keys are sorted, reals use the
// shortest round-trip form, lines end in LF.

enum class OutputFormat { csv, json };
std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view text);

/// Columns k, t, x_0..x_{n-1}, f, subgrad_norm. subgrad_norm is the norm of
/// the chosen subgradient; the last row, which has none, uses the
/// minimal-norm element at the final point.
std::string trajectory_csv(const CatalogFunction& fn, const Trajectory& traj);
/// Columns t, x_0..x_{n-1}, f, min_norm_subgrad.
std::string flow_csv(const FlowSolution& sol);
/// Columns sample, x_0, x_1, exit_index (empty when the sample stayed).
std::string escape_samples_csv(const EscapeStats& stats);

nlohmann::json vector_json(const Vector& v);
/// {id, dim, semialgebraic, convex}
nlohmann::json descriptor_json(const CatalogFunction& fn);
nlohmann::json catalog_json();
nlohmann::json trajectory_json(const CatalogFunction& fn, const Trajectory& traj);
nlohmann::json flow_json(const FlowSolution& sol, double energy_residual);
nlohmann::json deviation_json(const DeviationReport& rep);
/// `witness_csv` is the path of the witness trajectory CSV relative to the
/// report, when one was written.
nlohmann::json verdict_json(const StabilityVerdict& verdict,
                            const std::optional<std::string>& witness_csv = std::nullopt);
nlohmann::json escape_stats_json(const EscapeStats& stats);
nlohmann::json bound_report_json(const BoundReport& rep);

/// Two-space indented JSON followed by a newline.
std::string dump_json(const nlohmann::json& j);

/// Writes `content` byte for byte. Throws IoError.
void write_report(std::string_view content, const std::filesystem::path& path);

}  // namespace nsdyn
