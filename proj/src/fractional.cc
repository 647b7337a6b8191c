#include "fracsys/fractional.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "fracsys/errors.h"

namespace fracsys {
namespace {

constexpr double kIntegerOrderTol = 1e-12;

bool is_integer_order(double alpha) {
  return std::abs(alpha - std::round(alpha)) < kIntegerOrderTol;
}

}  // namespace

int initial_condition_count(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::kInvalidArgument, "alpha must be a positive real");
  }
  if (is_integer_order(alpha)) return static_cast<int>(std::round(alpha));
  return static_cast<int>(std::ceil(alpha));
}

CaputoSystem::CaputoSystem(Matrix a, Matrix b, Matrix c, double alpha)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      alpha_(alpha),
      k_(initial_condition_count(alpha)) {
  if (a_.rows() != a_.cols()) fail(ErrorCode::kNonSquare, "A must be square");
  if (a_.rows() == 0) fail(ErrorCode::kInvalidArgument, "A must be nonempty");
  if (b_.rows() != a_.rows()) {
    fail(ErrorCode::kDimensionMismatch, "B must have as many rows as A");
  }
  if (c_.cols() != a_.cols()) {
    fail(ErrorCode::kDimensionMismatch, "C must have as many columns as A");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
}

InitialData InitialData::zero(int k, int n) {
  return InitialData{std::vector<Vector>(k, Vector::Zero(n))};
}

InitialData InitialData::from_stacked(const Vector& stacked, int k) {
  if (k < 1 || stacked.size() % k != 0) {
    fail(ErrorCode::kDimensionMismatch,
         "stacked initial data length is not a multiple of k");
  }
  const Eigen::Index n = stacked.size() / k;
  InitialData out;
  for (int j = 0; j < k; ++j) out.x0.push_back(stacked.segment(j * n, n));
  return out;
}

Vector InitialData::stacked() const {
  Eigen::Index total = 0;
  for (const Vector& v : x0) total += v.size();
  Vector out(total);
  Eigen::Index at = 0;
  for (const Vector& v : x0) {
    out.segment(at, v.size()) = v;
    at += v.size();
  }
  return out;
}

void InitialData::validate(int k, int n) const {
  if (static_cast<int>(x0.size()) != k) {
    std::ostringstream os;
    os << "expected " << k << " initial vectors, got " << x0.size();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
  for (const Vector& v : x0) {
    if (v.size() != n) {
      fail(ErrorCode::kDimensionMismatch, "initial vector has wrong length");
    }
    require_finite(v, "x0");
  }
}

ControlSignal::ControlSignal(int dim, Evaluator evaluator,
                             std::vector<double> breakpoints)
    : dim_(dim),
      evaluator_(std::move(evaluator)),
      breakpoints_(std::move(breakpoints)) {
  if (dim < 0) fail(ErrorCode::kInvalidArgument, "negative control dimension");
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

ControlSignal ControlSignal::zero(int dim) {
  return ControlSignal(dim, [dim](double) { return Vector::Zero(dim); });
}

ControlSignal ControlSignal::constant(const Vector& value) {
  return ControlSignal(static_cast<int>(value.size()),
                       [value](double) { return value; });
}

ControlSignal ControlSignal::step(const Vector& before, const Vector& after,
                                  double t0) {
  if (before.size() != after.size()) {
    fail(ErrorCode::kDimensionMismatch, "step levels differ in size");
  }
  return ControlSignal(
      static_cast<int>(before.size()),
      [before, after, t0](double t) { return t < t0 ? before : after; }, {t0});
}

ControlSignal ControlSignal::sine(const Vector& amplitude, double omega,
                                  double phase) {
  return ControlSignal(static_cast<int>(amplitude.size()),
                       [amplitude, omega, phase](double t) {
                         return Vector(amplitude * std::sin(omega * t + phase));
                       });
}

ControlSignal ControlSignal::piecewise_constant(
    const std::vector<double>& times, const std::vector<Vector>& values) {
  if (times.empty() || times.size() != values.size()) {
    fail(ErrorCode::kDimensionMismatch,
         "piecewise-constant control needs one value per time");
  }
  if (times.front() != 0.0) {
    fail(ErrorCode::kInvalidArgument, "piecewise-constant control starts at 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      fail(ErrorCode::kInvalidArgument, "control times must increase");
    }
    if (values[i].size() != values[0].size()) {
      fail(ErrorCode::kDimensionMismatch, "control values differ in size");
    }
  }
  std::vector<double> breaks(times.begin() + 1, times.end());
  return ControlSignal(
      static_cast<int>(values[0].size()),
      [times, values](double t) {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const auto i = std::max<std::ptrdiff_t>(0, it - times.begin() - 1);
        return values[i];
      },
      breaks);
}

Vector ControlSignal::operator()(double t) const {
  Vector v = evaluator_(t);
  if (v.size() != dim_) {
    fail(ErrorCode::kDimensionMismatch, "control evaluator returned wrong size");
  }
  return v;
}

EvolutionOperators::EvolutionOperators(CaputoSystem system,
                                       SeriesOptions series, double rank_tol)
    : system_(std::move(system)),
      series_(series),
      expansion_(minimal_expansion(system_.A(), 2 * system_.n(), rank_tol)) {
  const int n = system_.n();
  powers_.reserve(n);
  powers_.push_back(Matrix::Identity(n, n));
  for (int l = 1; l < n; ++l) powers_.push_back(powers_.back() * system_.A());
}

Vector EvolutionOperators::beta_j(int j, double t, Basis basis) const {
  if (j < 0 || j >= system_.k()) {
    fail(ErrorCode::kInvalidArgument, "operator index j must lie in [0, k)");
  }
  return mittag_leffler_coefficients(reduction(expansion_, basis),
                                     system_.alpha(), j + 1.0, t, series_);
}

Vector EvolutionOperators::beta_alpha(double t, Basis basis) const {
  return mittag_leffler_coefficients(reduction(expansion_, basis),
                                     system_.alpha(), system_.alpha(), t,
                                     series_);
}

Matrix EvolutionOperators::combine(const Vector& beta) const {
  if (beta.size() > static_cast<Eigen::Index>(powers_.size())) {
    fail(ErrorCode::kDimensionMismatch, "more coefficients than powers of A");
  }
  const int n = system_.n();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < beta.size(); ++l) out += beta(l) * powers_[l];
  return out;
}

Matrix EvolutionOperators::phi_alpha_j(int j, double t) const {
  return combine(beta_j(j, t));
}

Matrix EvolutionOperators::phi_alpha(double t) const {
  return combine(beta_alpha(t));
}

Matrix EvolutionOperators::kernel_at(double sigma) const {
  if (!(sigma >= 0.0)) fail(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  return phi_alpha(std::pow(sigma, 1.0 / system_.alpha()));
}

Vector solve_homogeneous(const EvolutionOperators& ops, const InitialData& x0,
                         double t) {
  const CaputoSystem& sys = ops.system();
  x0.validate(sys.k(), sys.n());
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::kInvalidArgument, "t must be finite and nonnegative");
  }
  if (t == 0.0) return x0.x0[0];
  Vector x = Vector::Zero(sys.n());
  double t_power = 1.0;
  for (int j = 0; j < sys.k(); ++j) {
    x += t_power * (ops.phi_alpha_j(j, t) * x0.x0[j]);
    t_power *= t;
  }
  return x;
}

Vector solve_forced(const EvolutionOperators& ops, const InitialData& x0,
                    const ControlSignal& u, double t,
                    const QuadratureSpec& quad, QuadratureReport* report) {
  const CaputoSystem& sys = ops.system();
  if (u.dim() != sys.m()) {
    fail(ErrorCode::kDimensionMismatch, "control dimension differs from B");
  }
  Vector x = solve_homogeneous(ops, x0, t);
  if (t == 0.0) return x;

  const double alpha = sys.alpha();
  const double upper = std::pow(t, alpha);
  std::vector<double> breaks;
  for (double tau : u.breakpoints()) {
    if (tau > 0.0 && tau < t) breaks.push_back(std::pow(t - tau, alpha));
  }
  // u(t - sigma^{1/alpha}) is only smooth at sigma = 0 for alpha = 1.
  const Grading grading =
      (alpha == 1.0) ? Grading::kNone : Grading::kLeft;
  const Matrix& b = sys.B();
  const Integrand integrand = [&](double sigma) -> Matrix {
    const double tau = t - std::pow(sigma, 1.0 / alpha);
    return ops.kernel_at(sigma) * (b * u(std::max(tau, 0.0))) / alpha;
  };
  x += integrate(integrand, 0.0, upper, breaks, grading, quad, report);
  return x;
}

Vector output(const CaputoSystem& system, const Vector& x) {
  if (x.size() != system.n()) {
    fail(ErrorCode::kDimensionMismatch, "state has wrong length");
  }
  return system.C() * x;
}

}  // namespace fracsys
