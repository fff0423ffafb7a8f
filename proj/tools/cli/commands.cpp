#include "commands.hpp"

#include "report.hpp"

#include <hsnet/budget.hpp>
#include <hsnet/error.hpp>
#include <hsnet/input_family.hpp>
#include <hsnet/kernel_table.hpp>
#include <hsnet/verify.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <ostream>

namespace hsnet::cli {

namespace {

// Dense operator matrices beyond this many entries are refused.
constexpr double kMaxMatrixEntries = 2.5e8;

std::string num(double v) { return fmt::format("{:.17g}", v); }

Domain make_domain(const DomainSpec& d) {
  const auto k = static_cast<Eigen::Index>(d.lower.size());
  return Domain(Eigen::Map<const Eigen::VectorXd>(d.lower.data(), k),
                Eigen::Map<const Eigen::VectorXd>(d.upper.data(), k));
}

}  // namespace

Kernel build_kernel(const RunConfig& config, const Domain& domain) {
  const auto& spec = config.kernel;
  if (!spec.table.empty()) {
    const KernelTable table = read_kernel_table(config.resolve(spec.table));
    if (table.rows != spec.rows || table.cols != spec.cols) {
      throw ConfigError(fmt::format(
          "kernel.table: file holds {}x{} matrices, config says {}x{}",
          table.rows, table.cols, spec.rows, spec.cols));
    }
    return make_table_kernel(table, domain, spec.norm);
  }
  std::vector<KernelTerm> terms;
  for (std::size_t b = 0; b < spec.terms.size(); ++b) {
    KernelTerm t;
    try {
      t.scalar = parse_scalar_kernel(spec.terms[b], domain);
    } catch (const InvalidArgument& e) {
      throw ConfigError(fmt::format("kernel.term{}: {}", b, e.what()));
    }
    t.coefficient = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>(
        spec.coefficients[b].data(), spec.rows, spec.cols);
    terms.push_back(std::move(t));
  }
  return make_block_kernel(spec.rows, spec.cols, std::move(terms), spec.norm);
}

std::unique_ptr<Setup> resolve_parameters(const RunConfig& config) {
  auto s = std::make_unique<Setup>();
  s->config = config;
  s->domain.emplace(make_domain(config.domain));
  s->kernel.emplace(build_kernel(config, *s->domain));

  if (config.kernel.metrics == "analytic") {
    s->metrics = certified_metrics(*s->kernel);
  } else {
    if (config.run.strict_metrics) {
      throw ConfigError("kernel.metrics: strict_metrics admits analytic metrics only");
    }
    const int res = config.kernel.metrics_resolution > 0
                        ? config.kernel.metrics_resolution
                        : default_metrics_resolution(s->domain->dim());
    const auto deltas = default_omega_deltas(*s->domain);
    s->metrics = estimated_metrics(*s->kernel, *s->domain, deltas, res);
  }

  const auto& p = config.parameters;
  s->p = p.p;
  s->r = p.r;
  if (p.target_mode()) {
    const double mu = s->domain->measure();
    const double diam = s->domain->diameter();
    const ParameterSelection* chosen = nullptr;
    if (p.optimize_split) {
      s->split = optimize_split(*p.epsilon, p.p, p.r, mu, diam, s->metrics);
      s->selection = s->split->even_split;
      chosen = &s->split->optimized;
    } else {
      s->selection = select_parameters(*p.epsilon, p.p, p.r, mu, diam, s->metrics);
      chosen = &*s->selection;
    }
    s->lambda = chosen->lambda;
    s->gamma = chosen->gamma_star;
    s->partition_delta = chosen->partition_delta_star;
    s->magnitude_intervals = chosen->magnitude_intervals;
    s->sigma = chosen->sigma;
  } else {
    s->lambda = p.lambda;
    s->gamma = *p.gamma;
    s->partition_delta = *p.partition_delta;
    s->magnitude_intervals = *p.magnitude_intervals;
    s->sigma = *p.sigma;
  }
  return s;
}

std::unique_ptr<Setup> build_setup(const RunConfig& config) {
  auto s = resolve_parameters(config);
  const auto& run = config.run;
  s->grid.emplace(s->gamma, s->magnitude_intervals);
  s->input.emplace(quadrature_grid(*s->domain, s->partition_delta, run.quadrature_order));
  const double out_delta = run.output_delta > 0.0
                               ? run.output_delta
                               : default_output_delta(*s->domain, s->partition_delta);
  s->output.emplace(quadrature_grid(*s->domain, out_delta, run.quadrature_order));

  const double entries = static_cast<double>(s->input->node_count()) *
                         static_cast<double>(s->output->node_count()) *
                         s->kernel->rows() * s->kernel->cols();
  if (entries > kMaxMatrixEntries) {
    throw BudgetIntractable(fmt::format(
        "operator matrix would hold {:.3g} entries ({} input x {} output nodes); "
        "coarsen partition_delta or output_delta",
        entries, s->input->node_count(), s->output->node_count()));
  }
  s->net.emplace(build_sigma_net(s->kernel->cols(), s->sigma));
  s->op.emplace(*s->kernel, *s->input, *s->output);
  return s;
}

namespace {

BoundBreakdown bound_of(const Setup& s) {
  return error_bound({s.p, s.r, s.domain->measure(), s.lambda, s.gamma,
                      s.partition_delta, s.gamma / s.magnitude_intervals, s.sigma},
                     s.metrics, s.config.run.strict_metrics);
}

void print_bound(std::ostream& out, const BoundBreakdown& b) {
  fmt::print(out, "bound ({} metrics)\n", to_string(b.provenance));
  fmt::print(out, "  lambda  {}\n  tail    {}\n  psi     {}\n  phi     {}\n  alpha   {}\n",
             num(b.lambda), num(b.tail), num(b.psi), num(b.phi), num(b.alpha));
  fmt::print(out, "  total   {}\n", num(b.total));
  if (b.omega_extrapolated) fmt::print(out, "  omega past the table; used 2M\n");
}

std::string report_path(const RunConfig& c, const CommandOptions& o) {
  return o.report.empty() ? c.run.report : o.report;
}

// JSON goes to the report file when one is configured, otherwise to `out`.
// Returns true when `out` is free for a human summary.
bool emit(const Json& j, const RunConfig& c, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return false;
  }
  write_json(j, c.resolve(path));
  return true;
}

VerificationReport run_verification(const Setup& s) {
  const auto& run = s.config.run;
  CoverageOptions t;
  t.verify.samples = run.samples;
  t.verify.seed = run.seed;
  t.verify.ball.smoothness = run.smoothness;
  t.verify.ball.boundary_fraction = run.boundary_fraction;
  t.verify.ball.amplitude = run.amplitude;
  t.verify.lambda = s.lambda;
  t.verify.bound_scale = run.bound_scale;
  t.verify.strict_metrics = run.strict_metrics;
  t.family_mode = run.family_mode;
  t.family_samples = run.family_samples;
  t.enumeration_cap = run.enumeration_cap;
  return verify_all(*s.op, s.metrics, *s.grid, *s.net, s.p, s.r, t);
}

}  // namespace

int cmd_bound(const RunConfig& config, const CommandOptions& options,
              std::ostream& out) {
  const auto s = resolve_parameters(config);
  const BoundBreakdown b = bound_of(*s);
  Json j = report_header("bound", *s);
  j["bound"] = to_json(b);
  if (emit(j, config, report_path(config, options), out)) {
    if (s->selection) {
      fmt::print(out, "epsilon {}: gamma {} Delta {} delta {} sigma {}\n",
                 num(s->selection->epsilon), num(s->gamma), num(s->partition_delta),
                 num(s->gamma / s->magnitude_intervals), num(s->sigma));
    }
    print_bound(out, b);
  }
  return kPass;
}

int cmd_build(const RunConfig& config, const CommandOptions& options,
              std::ostream& out) {
  const auto s = build_setup(config);
  const auto& run = config.run;
  const Budget budget(*s->input, *s->grid, s->p, s->r);
  const std::size_t directions = s->net->size();

  std::string count = "unknown";
  bool countable = true;
  try {
    count = count_family(budget, directions).str();
  } catch (const BudgetIntractable&) {
    countable = false;
  }

  Json j = report_header("build", *s);
  Json family = {{"count", count},
                 {"mode", std::string(to_string(run.family_mode))},
                 {"budget_arithmetic", budget.arithmetic() == BudgetArithmetic::exact_integer
                                           ? "exact-integer"
                                           : "floating"},
                 {"budget_slack", budget.slack()}};

  std::vector<NetMember> members;
  int code = kPass;
  std::string skipped;
  if (run.family_mode == FamilyMode::enumerate) {
    try {
      members = enumerate_family(budget, directions, run.enumeration_cap);
      if (!countable) count = std::to_string(members.size());
    } catch (const FamilyTooLarge& e) {
      skipped = e.what();
      code = kResourceError;
    }
  } else {
    members = sample_family(budget, directions, run.family_samples, run.seed);
  }
  family["count"] = count;
  family["rows"] = members.size();
  family["enumerated"] = skipped.empty();

  if (skipped.empty()) {
    const std::string family_path = run.family_file.empty() ? "family.csv" : run.family_file;
    const std::string image_path = run.image_file.empty() ? "images.csv" : run.image_file;
    std::ofstream fam(config.resolve(family_path));
    if (!fam) throw std::runtime_error("cannot write " + family_path);
    fam << "member";
    for (std::size_t i = 0; i < s->input->size(); ++i) fam << ",j" << i << ",l" << i;
    fam << '\n';
    for (std::size_t m = 0; m < members.size(); ++m) {
      fam << m;
      for (std::size_t i = 0; i < members[m].cell_count(); ++i) {
        fam << ',' << members[m].magnitude[i] << ',' << members[m].direction[i];
      }
      fam << '\n';
    }

    const auto images = image_of_family(*s->op, members, *s->grid, *s->net);
    std::ofstream img(config.resolve(image_path));
    if (!img) throw std::runtime_error("cannot write " + image_path);
    img << "member";
    for (std::size_t o = 0; o < s->output->node_count(); ++o) {
      for (int c = 0; c < s->kernel->rows(); ++c) img << ",y" << o << '_' << c;
    }
    img << '\n';
    for (std::size_t m = 0; m < images.size(); ++m) {
      img << m;
      const auto& v = images[m].values;
      for (Eigen::Index o = 0; o < v.cols(); ++o) {
        for (Eigen::Index c = 0; c < v.rows(); ++c) img << ',' << num(v(c, o));
      }
      img << '\n';
    }
    family["family_file"] = family_path;
    family["image_file"] = image_path;
  } else {
    family["error"] = skipped;
  }

  Json nodes = Json::array();
  for (const auto& node : s->output->nodes()) {
    Json point = Json::array();
    for (Eigen::Index a = 0; a < node.point.size(); ++a) point.push_back(node.point[a]);
    nodes.push_back({{"point", std::move(point)}, {"weight", node.weight}});
  }
  j["family"] = std::move(family);
  j["output_nodes"] = std::move(nodes);

  if (emit(j, config, report_path(config, options), out)) {
    fmt::print(out, "family count {}\n", count);
    if (skipped.empty()) {
      fmt::print(out, "wrote {} members\n", members.size());
    } else {
      fmt::print(out, "{}\n", skipped);
    }
  }
  return code;
}

int cmd_verify(const RunConfig& config, const CommandOptions& options,
               std::ostream& out) {
  const auto s = build_setup(config);
  const VerificationReport v = run_verification(*s);

  Json j = report_header("verify", *s);
  j["bound"] = to_json(v.coverage.bound);
  j["steps"] = to_json(v.steps);
  j["coverage"] = to_json(v.coverage);
  j["pass"] = v.pass;

  if (emit(j, config, report_path(config, options), out)) {
    print_bound(out, v.coverage.bound);
    for (const auto& st : v.steps.steps) {
      fmt::print(out, "step {} {:<8} observed {} bound {} {}\n", st.step, st.name,
                 num(st.observed), num(st.bound), st.pass ? "ok" : "FAIL");
    }
    fmt::print(out, "tchebyshev       observed {} bound {} {}\n",
               num(v.steps.tchebyshev.observed), num(v.steps.tchebyshev.bound),
               v.steps.tchebyshev.pass ? "ok" : "FAIL");
    fmt::print(out, "family {} ({} images, {})\n", v.coverage.family_count,
               v.coverage.family_images, to_string(v.coverage.family_mode));
    fmt::print(out, "observed directed distance {} over {} samples\n",
               num(v.coverage.observed), v.coverage.samples);
    fmt::print(out, "certified total {}  ratio {}\n",
               num(v.coverage.bound.total * config.run.bound_scale), num(v.coverage.ratio));
    fmt::print(out, "{}\n", v.pass ? "PASS" : "FAIL");
  }
  return v.pass ? kPass : kVerificationFailed;
}

RunConfig with_axis_value(const RunConfig& config, const std::string& axis,
                          double value) {
  RunConfig c = config;
  auto& p = c.parameters;
  const bool explicit_axis = axis != "epsilon" && axis != "r";
  if (explicit_axis && p.target_mode()) {
    throw ConfigError("sweep axis '" + axis + "' needs explicit parameters, not epsilon");
  }
  if (axis == "gamma") {
    p.gamma = value;
  } else if (axis == "partition_delta") {
    p.partition_delta = value;
  } else if (axis == "sigma") {
    p.sigma = value;
  } else if (axis == "lambda") {
    p.lambda = value;
  } else if (axis == "magnitude_intervals") {
    if (value < 1.0 || value != std::floor(value)) {
      throw ConfigError("sweep magnitude_intervals values must be positive integers");
    }
    p.magnitude_intervals = static_cast<std::uint32_t>(value);
  } else if (axis == "magnitude_delta") {
    const double a = std::round(*p.gamma / value);
    if (a < 1.0 || std::abs(*p.gamma / a - value) > 1e-9 * value) {
      throw ConfigError(fmt::format("sweep magnitude_delta {}: gamma must be an integer multiple", value));
    }
    p.magnitude_intervals = static_cast<std::uint32_t>(a);
  } else if (axis == "epsilon") {
    if (!p.target_mode()) throw ConfigError("sweep axis 'epsilon' needs a target-mode config");
    p.epsilon = value;
  } else if (axis == "r") {
    p.r = value;
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  // Re-parse so every swept value passes the same validation as a file.
  RunConfig checked = parse_config(serialize_config(c));
  checked.base_dir = config.base_dir;
  return checked;
}

int cmd_sweep(const RunConfig& config, const SweepOptions& options,
              std::ostream& out) {
  if (options.values.empty()) throw ConfigError("sweep needs at least one value");
  std::string csv = options.axis +
                    ",total,lambda,tail,psi,phi,alpha,observed,ratio,steps_pass,pass\n";
  bool all_pass = true;
  for (double value : options.values) {
    const RunConfig c = with_axis_value(config, options.axis, value);
    const auto s = build_setup(c);
    const VerificationReport v = run_verification(*s);
    const auto& b = v.coverage.bound;
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(value), num(b.total),
                       num(b.lambda), num(b.tail), num(b.psi), num(b.phi), num(b.alpha),
                       num(v.coverage.observed), num(v.coverage.ratio),
                       v.steps.pass ? 1 : 0, v.pass ? 1 : 0);
    all_pass = all_pass && v.pass;
  }
  const std::string path = options.output.empty() ? config.run.sweep_file : options.output;
  if (path.empty()) {
    out << csv;
  } else {
    std::ofstream f(config.resolve(path));
    if (!f) throw std::runtime_error("cannot write " + path);
    f << csv;
    fmt::print(out, "wrote {} rows to {}\n", options.values.size(), path);
  }
  return all_pass ? kPass : kVerificationFailed;
}

int cmd_tabulate(const RunConfig& config, int nodes, const std::string& path,
                 bool binary, std::ostream& out) {
  const Domain domain = make_domain(config.domain);
  const Kernel kernel = build_kernel(config, domain);
  const KernelTable table = tabulate(kernel, domain, nodes);
  write_kernel_table(table, config.resolve(path), binary ? TableEncoding::binary_le : TableEncoding::text);
  fmt::print(out, "wrote {} grid points to {}\n", table.grid_points(), path);
  return kPass;
}

}  // namespace hsnet::cli
