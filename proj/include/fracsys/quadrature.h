#pragma once

#include <functional>
#include <vector>

#include "fracsys/matrix_core.h"

namespace fracsys {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; nodes from Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

/// Endpoint toward which the panels are refined geometrically.
enum class Grading { kNone, kLeft, kRight };

struct QuadratureSpec {
  int nodes = 16;
  /// Two successive refinement levels must agree to this relative size.
  double tol = 1e-8;
  int max_level = 7;
  int graded_panels = 12;
  double grading_ratio = 0.25;
};

struct QuadratureReport {
  int level = 0;
  long evaluations = 0;
  double discrepancy = 0.0;
};

using Integrand = std::function<Matrix(double)>;

/// Composite Gauss-Legendre over [a, b]. The interval is cut at the given
/// breakpoints (those outside (a, b) are ignored), the graded end segment is
/// split geometrically, and every panel is halved per level until two levels
/// agree. Throws kQuadratureNonConvergence after spec.max_level.
Matrix integrate(const Integrand& f, double a, double b,
                 const std::vector<double>& breakpoints, Grading grading,
                 const QuadratureSpec& spec = {},
                 QuadratureReport* report = nullptr);

}  // namespace fracsys
