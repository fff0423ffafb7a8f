#include "hsnet/kernel.hpp"

#include "hsnet/error.hpp"

#include <Eigen/SVD>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace hsnet {

std::string_view to_string(MatrixNorm n) {
  return n == MatrixNorm::spectral ? "spectral" : "frobenius";
}

MatrixNorm parse_matrix_norm(std::string_view s) {
  if (s == "spectral") return MatrixNorm::spectral;
  if (s == "frobenius") return MatrixNorm::frobenius;
  throw InvalidArgument("unknown matrix norm '" + std::string(s) + "'");
}

double matrix_norm(const Eigen::MatrixXd& a, MatrixNorm norm) {
  if (norm == MatrixNorm::frobenius || a.rows() == 1 || a.cols() == 1) {
    return a.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

namespace {

// Largest |xi . s| over the box: a bilinear form peaks at corner pairs.
double max_corner_dot(const Domain& d) {
  const int k = d.dim();
  double best = 0.0;
  for (unsigned c1 = 0; c1 < (1u << k); ++c1) {
    for (unsigned c2 = 0; c2 < (1u << k); ++c2) {
      double dot = 0.0;
      for (int a = 0; a < k; ++a) {
        const double x = (c1 >> a) & 1u ? d.upper()[a] : d.lower()[a];
        const double y = (c2 >> a) & 1u ? d.upper()[a] : d.lower()[a];
        dot += x * y;
      }
      best = std::max(best, std::abs(dot));
    }
  }
  return best;
}

double max_corner_norm(const Domain& d) {
  double sq = 0.0;
  for (int a = 0; a < d.dim(); ++a) {
    sq += std::max(d.lower()[a] * d.lower()[a], d.upper()[a] * d.upper()[a]);
  }
  return std::sqrt(sq);
}

}  // namespace

ScalarKernel constant_kernel(double c) {
  return {"constant", {{"c", c}},
          [c](const Point&, const Point&) { return c; }, std::abs(c), 0.0};
}

ScalarKernel dot_kernel(const Domain& domain) {
  return {"dot", {},
          [](const Point& xi, const Point& s) { return xi.dot(s); },
          max_corner_dot(domain), max_corner_norm(domain)};
}

ScalarKernel gaussian_kernel(const Domain& domain, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("gaussian: beta must be positive");
  // |grad_s| = 2 beta t exp(-beta t^2) with t = |xi - s|, peaking at
  // t = 1 / sqrt(2 beta); t never exceeds the diameter.
  const double lip = std::min(std::sqrt(2.0 * beta / std::numbers::e),
                              2.0 * beta * domain.diameter());
  return {"gaussian", {{"beta", beta}},
          [beta](const Point& xi, const Point& s) {
            return std::exp(-beta * (xi - s).squaredNorm());
          },
          1.0, lip};
}

ScalarKernel separable_kernel(const Domain& domain, double a, double b) {
  const double lo = a * domain.lower().sum();
  const double hi = a * domain.upper().sum();
  const double sup = std::exp(std::max(lo, hi));
  const double lip = std::abs(b) * std::sqrt(static_cast<double>(domain.dim())) * sup;
  return {"separable", {{"a", a}, {"b", b}},
          [a, b](const Point& xi, const Point& s) {
            return std::exp(a * xi.sum()) * std::cos(b * s.sum());
          },
          sup, lip};
}

ScalarKernel parse_scalar_kernel(std::string_view spec, const Domain& domain) {
  std::string text = boost::algorithm::trim_copy(std::string(spec));
  std::string name = text;
  std::map<std::string, double> params;
  if (const auto open = text.find('('); open != std::string::npos) {
    if (text.back() != ')') {
      throw InvalidArgument("kernel term '" + text + "': missing ')'");
    }
    name = boost::algorithm::trim_copy(text.substr(0, open));
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::vector<std::string> parts;
    boost::algorithm::split(parts, inner, boost::is_any_of(","));
    for (auto& part : parts) {
      boost::algorithm::trim(part);
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string::npos) {
        throw InvalidArgument("kernel term '" + text + "': expected key=value");
      }
      const std::string key = boost::algorithm::trim_copy(part.substr(0, eq));
      const std::string value = boost::algorithm::trim_copy(part.substr(eq + 1));
      try {
        params[key] = boost::lexical_cast<double>(value);
      } catch (const boost::bad_lexical_cast&) {
        throw InvalidArgument("kernel term '" + text + "': bad number '" +
                              value + "'");
      }
    }
  }

  auto take = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
  };

  ScalarKernel out;
  if (name == "constant") {
    out = constant_kernel(take("c", 1.0));
  } else if (name == "dot") {
    out = dot_kernel(domain);
  } else if (name == "gaussian") {
    out = gaussian_kernel(domain, take("beta", 1.0));
  } else if (name == "separable") {
    const double a = take("a", 1.0);
    out = separable_kernel(domain, a, take("b", 1.0));
  } else {
    throw InvalidArgument("unknown kernel '" + name + "'");
  }
  if (!params.empty()) {
    throw InvalidArgument("kernel '" + name + "': unknown parameter '" +
                          params.begin()->first + "'");
  }
  return out;
}

Kernel::Kernel(int rows, int cols, Evaluator eval, std::string description,
               MatrixNorm norm, std::optional<AnalyticBounds> bounds)
    : rows_(rows),
      cols_(cols),
      eval_(std::move(eval)),
      description_(std::move(description)),
      norm_(norm),
      bounds_(bounds) {
  if (rows < 1 || cols < 1) {
    throw InvalidArgument("kernel dimensions must be positive");
  }
  if (!eval_) throw InvalidArgument("kernel needs an evaluator");
}

Eigen::MatrixXd Kernel::operator()(const Point& xi, const Point& s) const {
  Eigen::MatrixXd out(rows_, cols_);
  eval_(xi, s, out);
  return out;
}

Kernel make_block_kernel(int rows, int cols, std::vector<KernelTerm> terms,
                         MatrixNorm norm) {
  AnalyticBounds bounds;
  std::ostringstream desc;
  for (std::size_t b = 0; b < terms.size(); ++b) {
    const auto& t = terms[b];
    if (t.coefficient.rows() != rows || t.coefficient.cols() != cols) {
      throw InvalidArgument("kernel term " + std::to_string(b) +
                            ": coefficient is not " + std::to_string(rows) +
                            "x" + std::to_string(cols));
    }
    const double a = matrix_norm(t.coefficient, norm);
    bounds.sup += a * t.scalar.sup;
    bounds.lipschitz += a * t.scalar.lipschitz;
    if (b > 0) desc << " + ";
    desc << t.scalar.name;
    if (!t.scalar.params.empty()) {
      desc << '(';
      bool first = true;
      for (const auto& [key, value] : t.scalar.params) {
        desc << (first ? "" : ", ") << key << '=' << value;
        first = false;
      }
      desc << ')';
    }
    desc << "*A" << b;
  }
  if (terms.empty()) desc << "zero";

  auto shared = std::make_shared<const std::vector<KernelTerm>>(std::move(terms));
  Kernel::Evaluator eval = [shared](const Point& xi, const Point& s,
                                    Eigen::MatrixXd& out) {
    out.setZero();
    for (const auto& t : *shared) out.noalias() += t.scalar.eval(xi, s) * t.coefficient;
  };
  return Kernel(rows, cols, std::move(eval), desc.str(), norm, bounds);
}

Kernel zero_kernel(int rows, int cols, MatrixNorm norm) {
  return make_block_kernel(rows, cols, {}, norm);
}

Kernel make_custom_kernel(int rows, int cols, Kernel::Evaluator eval,
                          std::string description,
                          std::optional<AnalyticBounds> bounds,
                          MatrixNorm norm) {
  return Kernel(rows, cols, std::move(eval), std::move(description), norm,
                bounds);
}

}  // namespace hsnet
