#include "nsdyn/report.hpp"

#include <fstream>
#include <limits>

#include "nsdyn/errors.hpp"
#include "nsdyn/format.hpp"

namespace nsdyn {

using nlohmann::json;

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw InvalidArgument("unknown format '" + std::string(text) + "'");
}

namespace {

void append_coordinate_header(std::string& out, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) out += ",x_" + std::to_string(i);
}

void append_coordinates(std::string& out, const Vector& x) {
  for (double c : x) {
    out += ',';
    out += format_real(c);
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string trajectory_csv(const CatalogFunction& fn, const Trajectory& traj) {
  std::string out = "k,t";
  append_coordinate_header(out, traj.dim());
  out += ",f,subgrad_norm\n";
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const Vector& x = traj.points[k];
    const bool finite = x.is_finite() && !(traj.diverged_at && *traj.diverged_at == k);
    double gnorm = 0.0;
    if (k < traj.chosen_subgradients.size())
      gnorm = traj.chosen_subgradients[k].norm();
    else if (finite)
      gnorm = minimal_norm_element(fn.subdifferential(x, 0.0)).norm();
    else
      gnorm = std::numeric_limits<double>::quiet_NaN();
    const double f = finite ? fn.evaluate(x) : std::numeric_limits<double>::quiet_NaN();
    out += std::to_string(k);
    out += ',';
    out += format_real(traj.alpha * static_cast<double>(k));
    append_coordinates(out, x);
    out += ',' + format_real(f) + ',' + format_real(gnorm) + '\n';
  }
  return out;
}

std::string flow_csv(const FlowSolution& sol) {
  std::string out = "t";
  append_coordinate_header(out, sol.x0.dim());
  out += ",f,min_norm_subgrad\n";
  for (std::size_t j = 0; j < sol.times.size(); ++j) {
    out += format_real(sol.times[j]);
    append_coordinates(out, sol.nodes[j]);
    out += ',' + format_real(sol.f_values[j]) + ',' +
           format_real(sol.min_norm_subgradients[j].norm()) + '\n';
  }
  return out;
}

std::string escape_samples_csv(const EscapeStats& stats) {
  std::string out = "sample,x_0,x_1,exit_index\n";
  for (std::size_t n = 0; n < stats.starts.size(); ++n) {
    out += std::to_string(n);
    append_coordinates(out, stats.starts[n]);
    out += ',';
    if (stats.exit_indices[n]) out += std::to_string(*stats.exit_indices[n]);
    out += '\n';
  }
  return out;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (double c : v) arr.push_back(c);
  return arr;
}

json descriptor_json(const CatalogFunction& fn) {
  return {{"id", std::string(fn.name())},
          {"dim", fn.dim()},
          {"semialgebraic", fn.semialgebraic()},
          {"convex", fn.convex()}};
}

json catalog_json() {
  json arr = json::array();
  for (const CatalogEntry& e : list_catalog()) {
    const CatalogFunction fn(e.id);
    json d = descriptor_json(fn);
    d["variable_dim"] = !e.fixed_dim.has_value();
    json mins = json::array();
    for (const Vector& m : fn.known_minimizers()) mins.push_back(vector_json(m));
    d["known_minimizers"] = mins;
    arr.push_back(std::move(d));
  }
  return arr;
}

json trajectory_json(const CatalogFunction& fn, const Trajectory& traj) {
  json points = json::array();
  for (const Vector& x : traj.points) points.push_back(vector_json(x));
  json subgrads = json::array();
  for (const Vector& s : traj.chosen_subgradients) subgrads.push_back(vector_json(s));
  return {{"function", descriptor_json(fn)},
          {"alpha", traj.alpha},
          {"policy", traj.policy.to_string()},
          {"seed", traj.seed},
          {"steps", traj.steps()},
          {"diverged_at", traj.diverged_at ? json(*traj.diverged_at) : json(nullptr)},
          {"points", points},
          {"chosen_subgradients", subgrads}};
}

json flow_json(const FlowSolution& sol, double residual) {
  const CatalogFunction fn(sol.fn_id, sol.x0.dim());
  return {{"function", descriptor_json(fn)},
          {"x0", vector_json(sol.x0)},
          {"horizon", sol.horizon},
          {"h", sol.step},
          {"nodes", sol.times.size()},
          {"x_final", vector_json(sol.nodes.back())},
          {"f_initial", sol.f_values.front()},
          {"f_final", sol.f_values.back()},
          {"energy_residual", residual}};
}

json deviation_json(const DeviationReport& rep) {
  return {{"alpha", rep.alpha},
          {"h", rep.step},
          {"sup_dev", rep.sup_dev},
          {"t_argmax", rep.t_argmax},
          {"solution", "minimal_norm_selection"}};
}

json verdict_json(const StabilityVerdict& v, const std::optional<std::string>& witness_csv) {
  const StabilityQuery& q = v.query;
  json query = {{"function", std::string(to_string(q.fn_id))},
                {"x_star", vector_json(q.x_star)},
                {"epsilon", q.epsilon},
                {"delta_grid", q.delta_grid},
                {"alpha_grid", q.alpha_grid},
                {"samples", q.samples},
                {"max_iters", q.max_iters ? json(*q.max_iters) : json(nullptr)},
                {"policy", q.policy.to_string()},
                {"seed", q.seed}};
  json cells = json::array();
  for (const ProbeCell& c : v.cells)
    cells.push_back({{"delta", c.delta},
                     {"alpha", c.alpha},
                     {"max_iters", c.max_iters},
                     {"escapes", c.escapes}});
  json out = {{"query", query},
              {"status", std::string(to_string(v.status))},
              {"cells", cells},
              {"lipschitz_estimate", v.lipschitz_estimate}};
  if (v.certificate) {
    const auto& c = *v.certificate;
    out["certificate"] = {{"epsilon", c.epsilon},
                          {"delta", c.delta},
                          {"alpha_bar", c.alpha_bar},
                          {"samples", c.samples},
                          {"max_iters", c.max_iters},
                          {"policy", q.policy.to_string()}};
  }
  if (v.witness) {
    const auto& w = *v.witness;
    out["witness"] = {{"x0", vector_json(w.x0)},
                      {"delta", w.delta},
                      {"alpha", w.alpha},
                      {"sample_index", w.sample_index},
                      {"exit_index", w.exit_index},
                      {"trajectory_seed", w.trajectory.seed},
                      {"exit_point", vector_json(w.trajectory.points.back())},
                      {"trajectory_csv", witness_csv ? json(*witness_csv) : json(nullptr)}};
  }
  return out;
}

json escape_stats_json(const EscapeStats& s) {
  json stuck = json::array();
  for (const Vector& x : s.non_escaping_off_S) stuck.push_back(vector_json(x));
  return {{"epsilon", s.epsilon},
          {"alpha", s.alpha},
          {"N", s.samples},
          {"K_max", s.max_steps},
          {"seed", s.seed},
          {"escaped_count", s.escaped_count},
          {"stuck_on_S_count", s.stuck_on_S_count},
          {"max_exit_index", s.max_exit_index ? json(*s.max_exit_index) : json(nullptr)},
          {"non_escaping_off_S", stuck}};
}

json bound_report_json(const BoundReport& r) {
  return {{"function", std::string(to_string(r.fn_id))},
          {"alpha", r.alpha},
          {"epsilon", r.epsilon},
          {"steps", r.steps},
          {"c", r.c},
          {"initial_distance", r.initial_distance},
          {"liminf_gap", r.liminf_gap},
          {"bound_c2a2", r.bound_c2a2},
          {"liminf_within_bound", r.liminf_within_bound},
          {"iters_budget", r.iters_budget},
          {"min_gap_within_budget", r.min_gap_within_budget},
          {"achieved_within_budget", r.achieved_within_budget},
          {"beta", optional_json(r.beta)},
          {"dist_bound", optional_json(r.dist_bound)},
          {"terminal_distance", r.terminal_distance},
          {"dist_within_bound",
           r.dist_within_bound ? json(*r.dist_within_bound) : json(nullptr)}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_report(std::string_view content, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace nsdyn
