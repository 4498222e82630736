#include "nsdyn/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nsdyn/catalog.hpp"
#include "nsdyn/counterexample.hpp"
#include "nsdyn/engine.hpp"
#include "nsdyn/errors.hpp"
#include "nsdyn/flow.hpp"
#include "nsdyn/prober.hpp"
#include "nsdyn/report.hpp"

namespace nsdyn {

using nlohmann::json;

const char* const kUsage = R"(usage: nsdyn <command> [flags]
       nsdyn --config run.json [flags]

commands:
  list-functions
  simulate       --function ID --x0 V --alpha A --steps K [--policy P] [--seed S]
  flow           --function ID --x0 V [--horizon T=1] [--h H=1e-4]
  compare        --function ID --x0 V --alpha A [--horizon T=1] [--h H=alpha/100]
  probe          --function ID --xstar V --epsilon E [--delta D | --delta-grid G]
                 [--alpha-grid G] [--samples N=100] [--steps K] [--policy P] [--seed S]
  counterexample [--epsilon E=0.25] --alpha A [--samples N=1000] [--steps K=100000]
                 [--seed S] [--sample-csv PATH]
  convex-bounds  --function ID --x0 V --alpha A --epsilon E [--steps K=1000] [--seed S]

flags:
  V, G           comma-separated reals, e.g. 1,0.1
  --policy P     minimal_norm | random_extreme | fixed_index:<i>
  --out PATH     output file (stdout when absent); compare treats it as a prefix
  --format F     csv | json (csv for trajectories and flows, json for reports)
  --threads N    worker threads for probe and counterexample (0 = all cores)
  --config PATH  JSON run configuration; explicit flags override its fields
environment:
  NSDYN_SEED     overrides --seed
exit codes: 0 success, 2 usage error, 3 numerical divergence
)";

namespace {

const std::vector<std::string> kCommands = {"list-functions", "simulate",       "flow",
                                            "compare",        "probe",          "counterexample",
                                            "convex-bounds"};

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v))
      throw InvalidArgument(std::string(flag) + ": cannot parse '" + text + "' as a list of reals");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return values;
}

template <class T>
void merge(std::optional<T>& target, const std::optional<T>& flag) {
  if (flag) target = flag;
}

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& command) {
  if (!v) throw InvalidArgument(command + " requires " + flag);
  return *v;
}

Vector to_vector(const std::vector<double>& v) { return Vector(std::span<const double>(v)); }

std::uint64_t seed_of(const RunConfig& cfg) { return cfg.seed.value_or(0); }

OutputFormat format_of(const RunConfig& cfg, OutputFormat fallback) {
  return cfg.format ? parse_output_format(*cfg.format) : fallback;
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out)
    write_report(content, *cfg.out);
  else
    out << content;
}

// Steps needed to cover [0, T] with step alpha, robust to T/alpha landing a
// hair above an integer.
std::size_t steps_to_cover(double horizon, double alpha) {
  return static_cast<std::size_t>(std::ceil(horizon / alpha * (1.0 - 1e-12)));
}

template <class T>
void read_field(const json& j, const char* key, std::optional<T>& field) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
void write_field(json& j, const char* key, const std::optional<T>& field) {
  if (field) j[key] = *field;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto id = parse_function_id(need(cfg.function, "--function", cfg.command));
  const Vector x0 = to_vector(need(cfg.x0, "--x0", cfg.command));
  const CatalogFunction fn(id, x0.dim());
  const double alpha = need(cfg.alpha, "--alpha", cfg.command);
  const std::size_t steps = need(cfg.steps, "--steps", cfg.command);
  const SelectionPolicy policy =
      cfg.policy ? SelectionPolicy::parse(*cfg.policy) : SelectionPolicy::minimal_norm();
  const Trajectory traj = run(fn, x0, alpha, steps, policy, seed_of(cfg));
  if (format_of(cfg, OutputFormat::csv) == OutputFormat::csv)
    emit(cfg, trajectory_csv(fn, traj), out);
  else
    emit(cfg, dump_json(trajectory_json(fn, traj)), out);
  return traj.diverged_at ? kExitDiverged : kExitOk;
}

int run_flow(const RunConfig& cfg, std::ostream& out) {
  const auto id = parse_function_id(need(cfg.function, "--function", cfg.command));
  const Vector x0 = to_vector(need(cfg.x0, "--x0", cfg.command));
  const CatalogFunction fn(id, x0.dim());
  const FlowSolution sol = integrate_flow(fn, x0, cfg.horizon.value_or(1.0), cfg.h.value_or(1e-4));
  if (format_of(cfg, OutputFormat::csv) == OutputFormat::csv)
    emit(cfg, flow_csv(sol), out);
  else
    emit(cfg, dump_json(flow_json(sol, energy_residual(fn, sol))), out);
  return kExitOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  const auto id = parse_function_id(need(cfg.function, "--function", cfg.command));
  const Vector x0 = to_vector(need(cfg.x0, "--x0", cfg.command));
  const CatalogFunction fn(id, x0.dim());
  const double alpha = need(cfg.alpha, "--alpha", cfg.command);
  const double horizon = cfg.horizon.value_or(1.0);
  const double h = cfg.h.value_or(alpha / 100.0);
  Trajectory traj = run(fn, x0, alpha, steps_to_cover(horizon, alpha));
  const std::string discrete = trajectory_csv(fn, traj);
  const InterpolatedPath path(std::move(traj), horizon);
  const FlowSolution sol = integrate_flow(fn, x0, path.end_time(), h);
  json report = deviation_json(sup_deviation(path, sol));
  report["function"] = descriptor_json(fn);
  report["x0"] = vector_json(x0);
  report["horizon"] = path.end_time();
  report["energy_residual"] = energy_residual(fn, sol);
  if (cfg.out) {
    const std::string prefix = *cfg.out;
    write_report(discrete, prefix + "_discrete.csv");
    write_report(flow_csv(sol), prefix + "_flow.csv");
    write_report(dump_json(report), prefix + "_deviation.json");
  } else {
    out << dump_json(report);
  }
  return kExitOk;
}

int run_probe(const RunConfig& cfg, std::ostream& out) {
  StabilityQuery q;
  q.fn_id = parse_function_id(need(cfg.function, "--function", cfg.command));
  q.x_star = to_vector(need(cfg.xstar, "--xstar", cfg.command));
  q.epsilon = need(cfg.epsilon, "--epsilon", cfg.command);
  if (cfg.delta && cfg.delta_grid) throw InvalidArgument("give --delta or --delta-grid, not both");
  if (cfg.delta) q.delta_grid = {*cfg.delta};
  if (cfg.delta_grid) q.delta_grid = *cfg.delta_grid;
  if (cfg.alpha_grid) q.alpha_grid = *cfg.alpha_grid;
  if (cfg.alpha && !cfg.alpha_grid) q.alpha_grid = {*cfg.alpha};
  q.samples = cfg.samples.value_or(100);
  q.max_iters = cfg.steps;
  if (cfg.policy) q.policy = SelectionPolicy::parse(*cfg.policy);
  q.seed = seed_of(cfg);
  q.threads = cfg.threads.value_or(0);
  const StabilityVerdict verdict = probe(q);

  std::optional<std::string> witness_ref;
  if (verdict.witness && cfg.out) {
    const std::filesystem::path report_path(*cfg.out);
    const std::string name = report_path.stem().string() + "_witness.csv";
    const CatalogFunction fn(q.fn_id, q.x_star.dim());
    write_report(trajectory_csv(fn, verdict.witness->trajectory), report_path.parent_path() / name);
    witness_ref = name;
  }
  emit(cfg, dump_json(verdict_json(verdict, witness_ref)), out);
  return kExitOk;
}

int run_counterexample(const RunConfig& cfg, std::ostream& out) {
  const EscapeStats stats =
      escape_experiment(cfg.epsilon.value_or(0.25), need(cfg.alpha, "--alpha", cfg.command),
                        cfg.samples.value_or(1000), cfg.steps.value_or(100000), seed_of(cfg),
                        cfg.threads.value_or(0));
  if (cfg.sample_csv) write_report(escape_samples_csv(stats), *cfg.sample_csv);
  emit(cfg, dump_json(escape_stats_json(stats)), out);
  return kExitOk;
}

int run_convex_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto id = parse_function_id(need(cfg.function, "--function", cfg.command));
  const Vector x0 = to_vector(need(cfg.x0, "--x0", cfg.command));
  const CatalogFunction fn(id, x0.dim());
  const BoundReport rep =
      convex_bounds_report(fn, x0, need(cfg.alpha, "--alpha", cfg.command),
                           need(cfg.epsilon, "--epsilon", cfg.command), cfg.steps.value_or(1000),
                           seed_of(cfg));
  emit(cfg, dump_json(bound_report_json(rep)), out);
  return kExitOk;
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  json j = json::object();
  j["command"] = cfg.command;
  write_field(j, "function", cfg.function);
  write_field(j, "x0", cfg.x0);
  write_field(j, "xstar", cfg.xstar);
  write_field(j, "alpha", cfg.alpha);
  write_field(j, "steps", cfg.steps);
  write_field(j, "horizon", cfg.horizon);
  write_field(j, "h", cfg.h);
  write_field(j, "epsilon", cfg.epsilon);
  write_field(j, "delta", cfg.delta);
  write_field(j, "delta_grid", cfg.delta_grid);
  write_field(j, "alpha_grid", cfg.alpha_grid);
  write_field(j, "samples", cfg.samples);
  write_field(j, "seed", cfg.seed);
  write_field(j, "policy", cfg.policy);
  write_field(j, "out", cfg.out);
  write_field(j, "format", cfg.format);
  write_field(j, "sample_csv", cfg.sample_csv);
  write_field(j, "threads", cfg.threads);
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::vector<std::string> known = {
      "command", "function", "x0",      "xstar",  "alpha",  "steps",      "horizon",
      "h",       "epsilon",  "delta",   "delta_grid", "alpha_grid", "samples", "seed",
      "policy",  "out",      "format",  "sample_csv", "threads"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw InvalidArgument("unknown config field '" + item.key() + "'");
  RunConfig cfg;
  std::optional<std::string> command;
  read_field(j, "command", command);
  cfg.command = command.value_or("");
  read_field(j, "function", cfg.function);
  read_field(j, "x0", cfg.x0);
  read_field(j, "xstar", cfg.xstar);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "steps", cfg.steps);
  read_field(j, "horizon", cfg.horizon);
  read_field(j, "h", cfg.h);
  read_field(j, "epsilon", cfg.epsilon);
  read_field(j, "delta", cfg.delta);
  read_field(j, "delta_grid", cfg.delta_grid);
  read_field(j, "alpha_grid", cfg.alpha_grid);
  read_field(j, "samples", cfg.samples);
  read_field(j, "seed", cfg.seed);
  read_field(j, "policy", cfg.policy);
  read_field(j, "out", cfg.out);
  read_field(j, "format", cfg.format);
  read_field(j, "sample_csv", cfg.sample_csv);
  read_field(j, "threads", cfg.threads);
  return cfg;
}

RunConfig parse_command_line(std::span<const std::string> args) {
  CLI::App app{"nsdyn"};
  app.set_help_flag();  // help is handled by the caller
  app.allow_windows_style_options(false);

  std::optional<std::string> config_path, function, x0, xstar, delta_grid, alpha_grid, policy, out,
      format, sample_csv;
  std::optional<double> alpha, horizon, h, epsilon, delta;
  std::optional<std::size_t> steps, samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  app.add_option("--config", config_path);
  app.add_option("--function", function);
  app.add_option("--x0", x0);
  app.add_option("--xstar", xstar);
  app.add_option("--alpha", alpha);
  app.add_option("--steps", steps);
  app.add_option("--horizon", horizon);
  app.add_option("--h", h);
  app.add_option("--epsilon", epsilon);
  app.add_option("--delta", delta);
  app.add_option("--delta-grid", delta_grid);
  app.add_option("--alpha-grid", alpha_grid);
  app.add_option("--samples", samples);
  app.add_option("--seed", seed);
  app.add_option("--policy", policy);
  app.add_option("--out", out);
  app.add_option("--format", format);
  app.add_option("--sample-csv", sample_csv);
  app.add_option("--threads", threads);
  for (const std::string& c : kCommands) app.add_subcommand(c)->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }

  RunConfig cfg;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw InvalidArgument("cannot read config " + *config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidArgument("config " + *config_path + ": " + e.what());
    }
    cfg = config_from_json(j);
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command.empty()) throw InvalidArgument("no command given");
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw InvalidArgument("unknown command '" + cfg.command + "'");

  merge(cfg.function, function);
  if (x0) cfg.x0 = parse_reals(*x0, "--x0");
  if (xstar) cfg.xstar = parse_reals(*xstar, "--xstar");
  merge(cfg.alpha, alpha);
  merge(cfg.steps, steps);
  merge(cfg.horizon, horizon);
  merge(cfg.h, h);
  merge(cfg.epsilon, epsilon);
  merge(cfg.delta, delta);
  if (delta_grid) cfg.delta_grid = parse_reals(*delta_grid, "--delta-grid");
  if (alpha_grid) cfg.alpha_grid = parse_reals(*alpha_grid, "--alpha-grid");
  merge(cfg.samples, samples);
  merge(cfg.seed, seed);
  merge(cfg.policy, policy);
  merge(cfg.out, out);
  merge(cfg.format, format);
  merge(cfg.sample_csv, sample_csv);
  merge(cfg.threads, threads);

  if (const char* env = std::getenv("NSDYN_SEED"); env && *env) {
    std::uint64_t s = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), s);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw InvalidArgument("NSDYN_SEED must be an unsigned integer");
    cfg.seed = s;
  }
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  if (cfg.command == "list-functions") {
    emit(cfg, dump_json(catalog_json()), out);
    return kExitOk;
  }
  if (cfg.command == "simulate") return run_simulate(cfg, out);
  if (cfg.command == "flow") return run_flow(cfg, out);
  if (cfg.command == "compare") return run_compare(cfg, out);
  if (cfg.command == "probe") return run_probe(cfg, out);
  if (cfg.command == "counterexample") return run_counterexample(cfg, out);
  if (cfg.command == "convex-bounds") return run_convex_bounds(cfg, out);
  throw InvalidArgument("unknown command '" + cfg.command + "'");
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  for (const std::string& a : args) {
    if (a == "--help" || a == "-h") {
      out << kUsage;
      return kExitOk;
    }
  }
  try {
    return execute(parse_command_line(args), out, err);
  } catch (const NonFiniteState& e) {
    err << "nsdyn: diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const IoError& e) {
    err << "nsdyn: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "nsdyn: " << e.what() << "\n\n" << kUsage;
    return kExitUsage;
  }
}

}  // namespace nsdyn
