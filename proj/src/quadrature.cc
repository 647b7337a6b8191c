#include "fracsys/quadrature.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "fracsys/errors.h"

namespace fracsys {
namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<std::pair<double, double>> base_panels(
    double a, double b, const std::vector<double>& breakpoints,
    Grading grading, const QuadratureSpec& spec) {
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double p : breakpoints) {
    if (p > a && p < b) inner.push_back(p);
  }
  std::sort(inner.begin(), inner.end());
  for (double p : inner) {
    if (p > cuts.back()) cuts.push_back(p);
  }
  cuts.push_back(b);

  std::vector<std::pair<double, double>> panels;
  const std::size_t last = cuts.size() - 2;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const bool left = grading == Grading::kLeft && i == 0;
    const bool right = grading == Grading::kRight && i == last;
    if (!left && !right) {
      panels.emplace_back(lo, hi);
      continue;
    }
    const double h = hi - lo;
    std::vector<double> marks;
    for (int g = spec.graded_panels; g >= 1; --g) {
      marks.push_back(h * std::pow(spec.grading_ratio, g));
    }
    if (left) {
      double prev = lo;
      for (double m : marks) {
        panels.emplace_back(prev, lo + m);
        prev = lo + m;
      }
      panels.emplace_back(prev, hi);
    } else {
      double prev = hi;
      std::vector<std::pair<double, double>> reversed;
      for (double m : marks) {
        reversed.emplace_back(hi - m, prev);
        prev = hi - m;
      }
      reversed.emplace_back(lo, prev);
      panels.insert(panels.end(), reversed.rbegin(), reversed.rend());
    }
  }
  return panels;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "Gauss rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

Matrix integrate(const Integrand& f, double a, double b,
                 const std::vector<double>& breakpoints, Grading grading,
                 const QuadratureSpec& spec, QuadratureReport* report) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorCode::kInvalidArgument, "integration bounds must satisfy a <= b");
  }
  if (spec.nodes < 1 || spec.max_level < 1 || !(spec.tol > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "invalid quadrature specification");
  }
  const GaussRule& rule = gauss_legendre(spec.nodes);
  const auto panels = base_panels(a, b, breakpoints, grading, spec);

  long evaluations = 0;
  auto level_sum = [&](int level, double& mass) {
    Matrix total;
    mass = 0.0;
    const int split = 1 << level;
    for (const auto& [lo, hi] : panels) {
      const double width = (hi - lo) / split;
      for (int s = 0; s < split; ++s) {
        const double left = lo + s * width;
        const double half = width / 2.0;
        for (int q = 0; q < spec.nodes; ++q) {
          const Matrix value = f(left + half * (1.0 + rule.nodes[q]));
          ++evaluations;
          const double w = half * rule.weights[q];
          if (total.size() == 0) total = Matrix::Zero(value.rows(), value.cols());
          total += w * value;
          mass += w * value.norm();
        }
      }
    }
    return total;
  };

  if (a == b) {
    const Matrix probe = f(a);
    if (report != nullptr) *report = QuadratureReport{0, 1, 0.0};
    return Matrix::Zero(probe.rows(), probe.cols());
  }

  double mass = 0.0;
  Matrix previous = level_sum(0, mass);
  double discrepancy = 0.0;
  for (int level = 1; level <= spec.max_level; ++level) {
    Matrix current = level_sum(level, mass);
    discrepancy = (current - previous).norm();
    require_finite(current, "integral");
    if (discrepancy <= spec.tol * current.norm() + 1e-14 * mass) {
      if (report != nullptr) {
        *report = QuadratureReport{level, evaluations, discrepancy};
      }
      return current;
    }
    previous = std::move(current);
  }
  std::ostringstream os;
  os << "refinement levels still differ by " << discrepancy << " after "
     << spec.max_level << " halvings (" << evaluations << " evaluations)";
  fail(ErrorCode::kQuadratureNonConvergence, os.str());
}

}  // namespace fracsys
