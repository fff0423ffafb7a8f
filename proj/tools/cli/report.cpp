#include "report.hpp"

#include <fstream>
#include <stdexcept>

namespace hsnet::cli {

Json to_json(const KernelMetrics& m) {
  Json j;
  j["provenance"] = std::string(to_string(m.provenance));
  j["norm"] = std::string(to_string(m.norm));
  j["M"] = m.M;
  j["lipschitz"] = m.lipschitz ? Json(*m.lipschitz) : Json(nullptr);
  j["resolution"] = m.resolution;
  Json table = Json::array();
  for (const auto& e : m.omega_table) table.push_back({{"delta", e.delta}, {"omega", e.omega}});
  j["omega_table"] = std::move(table);
  return j;
}

Json to_json(const BoundBreakdown& b) {
  return {{"lambda", b.lambda},
          {"c_star", b.c_star},
          {"tail", b.tail},
          {"psi", b.psi},
          {"phi", b.phi},
          {"alpha", b.alpha},
          {"total", b.total},
          {"M", b.M},
          {"omega", b.omega},
          {"omega_extrapolated", b.omega_extrapolated},
          {"provenance", std::string(to_string(b.provenance))}};
}

Json to_json(const ParameterSelection& s) {
  return {{"epsilon", s.epsilon},
          {"lambda", s.lambda},
          {"gamma_star", s.gamma_star},
          {"delta_star", s.delta_star},
          {"sigma_star", s.sigma_star},
          {"partition_delta_star", s.partition_delta_star},
          {"magnitude_intervals", s.magnitude_intervals},
          {"magnitude_delta", s.magnitude_delta},
          {"sigma", s.sigma},
          {"zero_kernel", s.zero_kernel},
          {"achieved", to_json(s.achieved)}};
}

Json to_json(const StepsReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", s.step},
                     {"name", s.name},
                     {"bound", s.bound},
                     {"observed", s.observed},
                     {"pass", s.pass}});
  }
  return {{"samples", r.samples},
          {"seed", r.seed},
          {"steps", std::move(steps)},
          {"tchebyshev",
           {{"bound", r.tchebyshev.bound},
            {"observed", r.tchebyshev.observed},
            {"pass", r.tchebyshev.pass}}},
          {"budget_repairs", r.budget_repairs},
          {"pass", r.pass}};
}

Json to_json(const CoverageReport& r) {
  Json curve = Json::array();
  for (const auto& c : r.max_so_far) curve.push_back({{"samples", c.samples}, {"distance", c.distance}});
  return {{"family_mode", std::string(to_string(r.family_mode))},
          {"family_count", r.family_count},
          {"family_images", r.family_images},
          {"samples", r.samples},
          {"seed", r.seed},
          {"certified_total", r.bound.total},
          {"observed_directed_distance", r.observed},
          {"observed_is_lower_estimate", true},
          {"reverse_directed_distance", r.reverse},
          {"projected_distance", r.projected},
          {"ratio", r.ratio},
          {"max_so_far", std::move(curve)},
          {"pass", r.pass}};
}

Json report_header(const std::string& command, const Setup& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = serialize_config(s.config);
  j["kernel"] = {{"description", s.kernel->description()},
                 {"rows", s.kernel->rows()},
                 {"cols", s.kernel->cols()},
                 {"norm", std::string(to_string(s.kernel->norm()))}};
  j["metrics"] = to_json(s.metrics);
  if (s.selection) j["selection"] = to_json(*s.selection);
  if (s.split) j["optimized_split"] = to_json(s.split->optimized);

  Json params = {{"p", s.p},
                 {"q", s.p / (s.p - 1.0)},
                 {"r", s.r},
                 {"measure", s.domain->measure()},
                 {"lambda", s.lambda},
                 {"gamma", s.gamma},
                 {"partition_delta", s.partition_delta},
                 {"magnitude_intervals", s.magnitude_intervals},
                 {"magnitude_delta", s.gamma / s.magnitude_intervals},
                 {"sigma", s.sigma}};
  if (s.input) {
    params["cells"] = s.input->size();
    params["input_nodes"] = s.input->node_count();
    params["output_nodes"] = s.output->node_count();
  }
  if (s.net) {
    params["net_size"] = s.net->size();
    params["net_construction"] = std::string(to_string(s.net->construction()));
  }
  j["parameters"] = std::move(params);
  return j;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace hsnet::cli
