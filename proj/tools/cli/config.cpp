#include "config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hsnet::cli {

namespace pt = boost::property_tree;

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

template <class T>
T parse_number(const std::string& field, const std::string& raw) {
  const std::string text = boost::algorithm::trim_copy(raw);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    fail(field, "expected a number, got '" + raw + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) fail(field, "must be finite");
  }
  return value;
}

std::vector<double> parse_list(const std::string& field, const std::string& raw) {
  std::vector<std::string> parts;
  const std::string text = boost::algorithm::trim_copy(raw);
  boost::algorithm::split(parts, text, boost::is_any_of(" \t,"),
                          boost::token_compress_on);
  std::vector<double> out;
  for (const auto& part : parts) {
    if (!part.empty()) out.push_back(parse_number<double>(field, part));
  }
  return out;
}

bool parse_bool(const std::string& field, const std::string& raw) {
  const std::string v = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(raw));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(field, "expected true or false, got '" + raw + "'");
}

// Reads one section and rejects keys nobody asked for.
class Section {
 public:
  Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (const auto child = root.get_child_optional(name_)) tree_ = *child;
  }
  //! Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, _] : tree_) {
      if (!used_.count(key)) fail(field(key), "unknown key");
    }
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return boost::algorithm::trim_copy(*v);
  }

  template <class T>
  std::optional<T> number(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_number<T>(field(key), *v);
  }

  template <class T>
  void number(const std::string& key, T& out) {
    if (const auto v = number<T>(key)) out = *v;
  }

  void text(const std::string& key, std::string& out) {
    if (const auto v = raw(key)) out = *v;
  }

  void flag(const std::string& key, bool& out) {
    if (const auto v = raw(key)) out = parse_bool(field(key), *v);
  }

  bool has(const std::string& key) const {
    return tree_.get_child_optional(pt::ptree::path_type(key, '\0')).has_value();
  }

 private:
  std::string name_;
  pt::ptree tree_;
  std::set<std::string> used_;
};

void read_domain(const pt::ptree& root, DomainSpec& d) {
  Section s(root, "domain");
  if (const auto v = s.raw("lower")) d.lower = parse_list(s.field("lower"), *v);
  if (const auto v = s.raw("upper")) d.upper = parse_list(s.field("upper"), *v);
  if (d.lower.empty() || d.lower.size() > 3) fail(s.field("lower"), "needs 1 to 3 entries");
  if (d.upper.size() != d.lower.size()) fail(s.field("upper"), "must match lower in length");
  for (std::size_t a = 0; a < d.lower.size(); ++a) {
    if (!(d.upper[a] > d.lower[a])) {
      fail(s.field("upper"), fmt::format("entry {} must exceed lower", a));
    }
  }
  s.finish();
}

void read_kernel(const pt::ptree& root, KernelSpec& k) {
  Section s(root, "kernel");
  s.number("rows", k.rows);
  s.number("cols", k.cols);
  if (k.rows < 1) fail(s.field("rows"), "must be >= 1");
  if (k.cols < 1) fail(s.field("cols"), "must be >= 1");
  if (const auto v = s.raw("norm")) {
    try {
      k.norm = parse_matrix_norm(*v);
    } catch (const std::exception& e) {
      fail(s.field("norm"), e.what());
    }
  }
  s.text("table", k.table);
  s.text("metrics", k.metrics);
  if (k.metrics != "analytic" && k.metrics != "estimated") {
    fail(s.field("metrics"), "must be 'analytic' or 'estimated'");
  }
  s.number("metrics_resolution", k.metrics_resolution);
  if (k.metrics_resolution != 0 && k.metrics_resolution < 2) {
    fail(s.field("metrics_resolution"), "must be 0 (default) or >= 2");
  }

  std::optional<int> count = s.number<int>("terms");
  if (!count) {
    int n = 0;
    while (s.has("term" + std::to_string(n))) ++n;
    count = n;
  }
  if (*count < 0) fail(s.field("terms"), "must be >= 0");
  if (*count > 0 && !k.table.empty()) {
    fail(s.field("table"), "a tabulated kernel cannot also have terms");
  }
  const auto entries = static_cast<std::size_t>(k.rows * k.cols);
  k.terms.clear();
  k.coefficients.clear();
  for (int b = 0; b < *count; ++b) {
    const std::string term_key = "term" + std::to_string(b);
    const std::string coeff_key = "coeff" + std::to_string(b);
    const auto term = s.raw(term_key);
    if (!term || term->empty()) fail(s.field(term_key), "missing");
    k.terms.push_back(*term);
    std::vector<double> coeff;
    if (const auto v = s.raw(coeff_key)) {
      coeff = parse_list(s.field(coeff_key), *v);
    } else if (k.rows == k.cols) {
      coeff.assign(entries, 0.0);
      for (int i = 0; i < k.rows; ++i) coeff[static_cast<std::size_t>(i * k.cols + i)] = 1.0;
    } else {
      fail(s.field(coeff_key), "required for a non-square kernel");
    }
    if (coeff.size() != entries) {
      fail(s.field(coeff_key), fmt::format("needs {} entries", entries));
    }
    k.coefficients.push_back(std::move(coeff));
  }
  s.finish();
}

void read_parameters(const pt::ptree& root, ParameterSpec& p) {
  Section s(root, "parameters");
  s.number("p", p.p);
  s.number("r", p.r);
  if (!(p.p > 1.0)) fail(s.field("p"), "must exceed 1");
  if (!(p.r > 0.0)) fail(s.field("r"), "must be positive");

  p.gamma = s.number<double>("gamma");
  p.partition_delta = s.number<double>("partition_delta");
  p.sigma = s.number<double>("sigma");
  p.epsilon = s.number<double>("epsilon");
  p.magnitude_intervals = s.number<std::uint32_t>("magnitude_intervals");
  const auto magnitude_delta = s.number<double>("magnitude_delta");
  const auto lambda = s.number<double>("lambda");
  s.flag("optimize_split", p.optimize_split);

  const bool any_explicit = p.gamma || p.partition_delta || p.sigma ||
                            p.magnitude_intervals || magnitude_delta || lambda;
  if (p.epsilon) {
    if (any_explicit) {
      fail(s.field("epsilon"),
           "give either epsilon or explicit gamma/partition_delta/magnitude/sigma, not both");
    }
    if (!(*p.epsilon > 0.0)) fail(s.field("epsilon"), "must be positive");
    s.finish();
    return;
  }
  if (p.optimize_split) fail(s.field("optimize_split"), "only applies with epsilon");
  if (!p.gamma) fail(s.field("gamma"), "missing (or set epsilon)");
  if (!p.partition_delta) fail(s.field("partition_delta"), "missing (or set epsilon)");
  if (!p.sigma) fail(s.field("sigma"), "missing (or set epsilon)");
  if (!(*p.gamma > 0.0)) fail(s.field("gamma"), "must be positive");
  if (!(*p.partition_delta > 0.0)) fail(s.field("partition_delta"), "must be positive");
  if (!(*p.sigma > 0.0 && *p.sigma <= 2.0)) fail(s.field("sigma"), "must lie in (0, 2]");
  if (lambda) {
    if (!(*lambda >= 0.0)) fail(s.field("lambda"), "must be non-negative");
    p.lambda = *lambda;
  }
  if (magnitude_delta && p.magnitude_intervals) {
    fail(s.field("magnitude_delta"), "give magnitude_delta or magnitude_intervals, not both");
  }
  if (magnitude_delta) {
    if (!(*magnitude_delta > 0.0 && *magnitude_delta <= *p.gamma)) {
      fail(s.field("magnitude_delta"), "must lie in (0, gamma]");
    }
    const double a = std::round(*p.gamma / *magnitude_delta);
    if (std::abs(*p.gamma / a - *magnitude_delta) > 1e-9 * *magnitude_delta) {
      fail(s.field("magnitude_delta"), "gamma must be an integer multiple of it");
    }
    p.magnitude_intervals = static_cast<std::uint32_t>(a);
  }
  if (!p.magnitude_intervals) fail(s.field("magnitude_delta"), "missing (or set epsilon)");
  if (*p.magnitude_intervals < 1) fail(s.field("magnitude_intervals"), "must be >= 1");
  s.finish();
}

void read_run(const pt::ptree& root, RunSpec& r) {
  Section s(root, "run");
  s.number("quadrature_order", r.quadrature_order);
  if (r.quadrature_order < 1) fail(s.field("quadrature_order"), "must be >= 1");
  s.number("output_delta", r.output_delta);
  if (r.output_delta < 0.0) fail(s.field("output_delta"), "must be >= 0");
  s.number("enumeration_cap", r.enumeration_cap);
  s.number("samples", r.samples);
  if (r.samples < 1) fail(s.field("samples"), "must be >= 1");
  if (const auto v = s.raw("family_mode")) {
    try {
      r.family_mode = parse_family_mode(*v);
    } catch (const std::exception& e) {
      fail(s.field("family_mode"), e.what());
    }
  }
  s.number("family_samples", r.family_samples);
  s.number("seed", r.seed);
  if (const auto v = s.raw("smoothness")) {
    try {
      r.smoothness = parse_smoothness(*v);
    } catch (const std::exception& e) {
      fail(s.field("smoothness"), e.what());
    }
  }
  s.number("boundary_fraction", r.boundary_fraction);
  if (r.boundary_fraction < 0.0 || r.boundary_fraction > 1.0) {
    fail(s.field("boundary_fraction"), "must lie in [0, 1]");
  }
  s.number("amplitude", r.amplitude);
  s.flag("strict_metrics", r.strict_metrics);
  s.number("bound_scale", r.bound_scale);
  if (!(r.bound_scale > 0.0)) fail(s.field("bound_scale"), "must be positive");
  s.text("report", r.report);
  s.text("family_file", r.family_file);
  s.text("image_file", r.image_file);
  s.text("sweep_file", r.sweep_file);
  s.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }
  for (const auto& [name, section] : root) {
    if (name != "domain" && name != "kernel" && name != "parameters" && name != "run") {
      fail(name, "unknown section");
    }
    if (!section.data().empty()) fail(name, "keys must live inside a section");
  }
  RunConfig c;
  read_domain(root, c.domain);
  read_kernel(root, c.kernel);
  read_parameters(root, c.parameters);
  read_run(root, c.run);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig c = parse_config(buffer.str());
  c.base_dir = path.parent_path();
  return c;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };

  out += "[domain]\n";
  line("lower", list(c.domain.lower));
  line("upper", list(c.domain.upper));

  out += "\n[kernel]\n";
  line("rows", std::to_string(c.kernel.rows));
  line("cols", std::to_string(c.kernel.cols));
  line("norm", std::string(to_string(c.kernel.norm)));
  line("metrics", c.kernel.metrics);
  line("metrics_resolution", std::to_string(c.kernel.metrics_resolution));
  if (!c.kernel.table.empty()) line("table", c.kernel.table);
  line("terms", std::to_string(c.kernel.terms.size()));
  for (std::size_t b = 0; b < c.kernel.terms.size(); ++b) {
    line("term" + std::to_string(b), c.kernel.terms[b]);
    line("coeff" + std::to_string(b), list(c.kernel.coefficients[b]));
  }

  const auto& p = c.parameters;
  out += "\n[parameters]\n";
  line("p", num(p.p));
  line("r", num(p.r));
  if (p.epsilon) {
    line("epsilon", num(*p.epsilon));
    line("optimize_split", p.optimize_split ? "true" : "false");
  } else {
    if (p.gamma) line("gamma", num(*p.gamma));
    if (p.partition_delta) line("partition_delta", num(*p.partition_delta));
    if (p.magnitude_intervals) line("magnitude_intervals", std::to_string(*p.magnitude_intervals));
    if (p.sigma) line("sigma", num(*p.sigma));
    line("lambda", num(p.lambda));
  }

  const auto& r = c.run;
  out += "\n[run]\n";
  line("quadrature_order", std::to_string(r.quadrature_order));
  line("output_delta", num(r.output_delta));
  line("enumeration_cap", std::to_string(r.enumeration_cap));
  line("samples", std::to_string(r.samples));
  line("family_mode", std::string(to_string(r.family_mode)));
  line("family_samples", std::to_string(r.family_samples));
  line("seed", std::to_string(r.seed));
  line("smoothness", std::string(to_string(r.smoothness)));
  line("boundary_fraction", num(r.boundary_fraction));
  line("amplitude", num(r.amplitude));
  line("strict_metrics", r.strict_metrics ? "true" : "false");
  line("bound_scale", num(r.bound_scale));
  if (!r.report.empty()) line("report", r.report);
  if (!r.family_file.empty()) line("family_file", r.family_file);
  if (!r.image_file.empty()) line("image_file", r.image_file);
  if (!r.sweep_file.empty()) line("sweep_file", r.sweep_file);
  return out;
}

}  // namespace hsnet::cli
