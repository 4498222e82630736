#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsdyn {

/// Everything a single CLI invocation needs. Unset fields fall back to the
/// per-command defaults listed in kUsage.
struct RunConfig {
  std::string command;
  std::optional<std::string> function;
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> xstar;
  std::optional<double> alpha;
  std::optional<std::size_t> steps;
  std::optional<double> horizon;
  std::optional<double> h;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::vector<double>> delta_grid;
  std::optional<std::vector<double>> alpha_grid;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> sample_csv;
  std::optional<unsigned> threads;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json config_to_json(const RunConfig& cfg);
/// Throws InvalidArgument on unknown keys or mistyped values.
RunConfig config_from_json(const nlohmann::json& j);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

extern const char* const kUsage;

/// Parses flags into a config (merging --config and NSDYN_SEED). Throws
/// InvalidArgument on usage errors. `args` excludes the program name.
RunConfig parse_command_line(std::span<const std::string> args);

/// Executes a parsed config. Reports go to cfg.out or to `out`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_command_line + execute with the documented exit codes: 0 success,
/// 2 usage error (grammar printed to `err`), 3 numerical divergence.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nsdyn
