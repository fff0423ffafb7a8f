#pragma once

#include "hsnet/geometry.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsnet {

//! Norm used for kernel values K(xi, s) in R^{m x n}.
enum class MatrixNorm { spectral, frobenius };

std::string_view to_string(MatrixNorm n);
MatrixNorm parse_matrix_norm(std::string_view s);

double matrix_norm(const Eigen::MatrixXd& a, MatrixNorm norm);

/*!
  Closed-form metrics of a kernel on a given domain.

  `sup` bounds |K(xi, s)| over the domain; `lipschitz` bounds the Lipschitz
  constant of s -> K(xi, s) uniformly in xi, both in the kernel's matrix norm.
*/
struct AnalyticBounds {
  double sup = 0.0;
  double lipschitz = 0.0;
};

using ScalarFn = std::function<double(const Point& xi, const Point& s)>;

//! Scalar kernel k(xi, s) with bounds valid on one domain.
struct ScalarKernel {
  std::string name;
  std::map<std::string, double> params;
  ScalarFn eval;
  double sup = 0.0;
  double lipschitz = 0.0;
};

/*!
  Builtin scalar kernels. The domain fixes the closed-form bounds.

    constant(c)            c
    dot                    xi . s
    gaussian(beta)         exp(-beta |xi - s|^2)
    separable(a, b)        exp(a sum(xi)) cos(b sum(s))
*/
ScalarKernel constant_kernel(double c);
ScalarKernel dot_kernel(const Domain& domain);
ScalarKernel gaussian_kernel(const Domain& domain, double beta);
ScalarKernel separable_kernel(const Domain& domain, double a, double b);

/*!
  Parses "name" or "name(key=value, ...)" into a builtin scalar kernel.
  Unknown names or parameters throw InvalidArgument.
*/
ScalarKernel parse_scalar_kernel(std::string_view spec, const Domain& domain);

//! One block term k(xi, s) * A of a matrix kernel.
struct KernelTerm {
  ScalarKernel scalar;
  Eigen::MatrixXd coefficient;
};

/*!
  Evaluable m x n matrix kernel on a box.

  The evaluator writes K(xi, s) into an m x n matrix. Kernels built from the
  catalogue or from a table carry analytic bounds; custom kernels may not.
*/
class Kernel {
 public:
  using Evaluator =
      std::function<void(const Point& xi, const Point& s, Eigen::MatrixXd& out)>;

  Kernel(int rows, int cols, Evaluator eval, std::string description,
         MatrixNorm norm, std::optional<AnalyticBounds> bounds);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  MatrixNorm norm() const noexcept { return norm_; }
  const std::string& description() const noexcept { return description_; }
  const std::optional<AnalyticBounds>& analytic() const noexcept {
    return bounds_;
  }

  void evaluate(const Point& xi, const Point& s, Eigen::MatrixXd& out) const {
    eval_(xi, s, out);
  }
  Eigen::MatrixXd operator()(const Point& xi, const Point& s) const;

  //! True when the analytic sup bound is zero.
  bool is_zero() const noexcept { return bounds_ && bounds_->sup == 0.0; }

 private:
  int rows_;
  int cols_;
  Evaluator eval_;
  std::string description_;
  MatrixNorm norm_;
  std::optional<AnalyticBounds> bounds_;
};

/*!
  K(xi, s) = sum_b k_b(xi, s) A_b. Bounds follow from the triangle inequality:
  M = sum_b |A_b| sup|k_b| and L = sum_b |A_b| L_b.
*/
Kernel make_block_kernel(int rows, int cols, std::vector<KernelTerm> terms,
                         MatrixNorm norm = MatrixNorm::spectral);

//! Identically zero m x n kernel.
Kernel zero_kernel(int rows, int cols, MatrixNorm norm = MatrixNorm::spectral);

Kernel make_custom_kernel(int rows, int cols, Kernel::Evaluator eval,
                          std::string description,
                          std::optional<AnalyticBounds> bounds = std::nullopt,
                          MatrixNorm norm = MatrixNorm::spectral);

}  // namespace hsnet
