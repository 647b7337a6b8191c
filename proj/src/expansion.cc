#include "fracsys/expansion.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "fracsys/errors.h"

namespace fracsys {

const PowerReduction& reduction(const MinimalExpansion& expansion,
                                Basis basis) {
  return basis == Basis::kMinimal ? expansion.minimal()
                                  : expansion.characteristic();
}

Matrix companion_matrix(const MinimalExpansion& expansion, Basis basis) {
  const Vector& base = reduction(expansion, basis).base();
  const Eigen::Index p = base.size();
  Matrix omega = Matrix::Zero(p, p);
  for (Eigen::Index i = 1; i < p; ++i) omega(i, i - 1) = 1.0;
  omega.col(p - 1) = base;
  return omega;
}

double root_bound(const Vector& base) {
  const Eigen::Index d = base.size();
  double bound = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double c = std::abs(base(k));
    if (c == 0.0) continue;
    // The constant term enters with half weight in Fujiwara's bound.
    const double scaled = (k == 0) ? c / 2.0 : c;
    bound = std::max(bound, std::pow(scaled, 1.0 / static_cast<double>(d - k)));
  }
  return 2.0 * bound;
}

Matrix evaluate_polynomial(const Eigen::Ref<const Matrix>& a,
                           const Vector& coeffs) {
  const Eigen::Index n = a.rows();
  Matrix out = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    out += coeffs(k) * power;
    if (k + 1 < coeffs.size()) power = power * a;
  }
  return out;
}

BetaSet beta_series(const MinimalExpansion& expansion, double t, double tol) {
  if (!(t >= 0.0)) fail(ErrorCode::kInvalidArgument, "t must be nonnegative");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  const int mu = expansion.mu();
  const Vector& base = expansion.minimal().base();

  BetaSet out;
  out.p = mu;
  out.t = t;
  out.path = BetaPath::kSeries;
  out.values = Vector::Zero(mu);

  // Leading terms t^k / k!.
  double leading = 1.0;
  for (int k = 0; k < mu; ++k) {
    if (k > 0) leading *= t / k;
    out.values(k) = leading;
  }

  // term(i) = a(i) t^i / i!, advanced by term(i+1) = step(term(i)) t/(i+1);
  // the recursion is linear so the scaling commutes with it.
  Vector term = base * leading * t / mu;
  const int hump = mu + static_cast<int>(std::ceil(root_bound(base) * t)) + 10;
  int small_run = 0;
  int growth_run = 0;
  double previous = term.cwiseAbs().maxCoeff();
  for (int i = mu;; ++i) {
    out.values += term;
    const double magnitude = term.cwiseAbs().maxCoeff();
    if (!std::isfinite(magnitude)) {
      std::ostringstream os;
      os << "series terms overflowed at index " << i
         << "; use the companion path for t = " << t;
      fail(ErrorCode::kSeriesDivergence, os.str());
    }
    small_run = (magnitude < tol) ? small_run + 1 : 0;
    if (small_run >= 3 && i >= hump) break;
    if (i > mu) {
      growth_run = (magnitude > previous) ? growth_run + 1 : 0;
      if (growth_run > 1000) {
        std::ostringstream os;
        os << "series terms grew for " << growth_run
           << " consecutive steps at index " << i
           << "; use the companion path for t = " << t;
        fail(ErrorCode::kSeriesDivergence, os.str());
      }
    }
    if (magnitude == 0.0 && i >= hump) break;
    previous = magnitude;
    term = PowerReduction::step(base, term) * (t / (i + 1));
  }
  return out;
}

BetaSet beta_companion(const MinimalExpansion& expansion, double t,
                       Basis basis) {
  if (!(t >= 0.0)) fail(ErrorCode::kInvalidArgument, "t must be nonnegative");
  const Matrix omega = companion_matrix(expansion, basis);
  BetaSet out;
  out.p = static_cast<int>(omega.rows());
  out.t = t;
  out.path = BetaPath::kCompanion;
  if (t == 0.0) {
    out.values = Vector::Unit(out.p, 0);
  } else {
    const Matrix scaled = omega * t;
    out.values = scaled.exp().col(0);
  }
  return out;
}

Matrix expm_via_expansion(const Eigen::Ref<const Matrix>& a,
                          const MinimalExpansion& expansion, double t,
                          BetaPath path) {
  if (a.rows() != expansion.n() || a.cols() != expansion.n()) {
    fail(ErrorCode::kDimensionMismatch, "A does not match the expansion");
  }
  const BetaSet beta = (path == BetaPath::kCompanion)
                           ? beta_companion(expansion, t)
                           : beta_series(expansion, t);
  return evaluate_polynomial(a, beta.values);
}

}  // namespace fracsys
