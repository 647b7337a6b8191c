#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fracsys {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default relative singular-value threshold for every rank decision.
inline constexpr double kDefaultRankTolerance = 1e-9;

/// Throws kNonFinite if any entry of `m` is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view name);

/// Numerical rank with threshold tol * sigma_max.
int numerical_rank(const Eigen::Ref<const Matrix>& m, double tol);

/// sigma_max / sigma_min; +inf when sigma_min is zero.
double condition_number(const Eigen::Ref<const Matrix>& m);

/// Coefficients that reduce s^p modulo a monic polynomial
///   s^d = sum_{k<d} base_k s^k,
/// tabulated for d <= p <= horizon. Row p - d of the table holds the
/// coefficients r_k(p) with A^p = sum_k r_k(p) A^k whenever the polynomial
/// annihilates A. Rows are produced by the one-step recursion
///   r_k(p+1) = r_{k-1}(p) + r_{d-1}(p) * base_k,   r_{-1} = 0.
class PowerReduction {
 public:
  PowerReduction() = default;
  PowerReduction(Vector base, int horizon);

  int degree() const { return static_cast<int>(base_.size()); }
  int horizon() const { return horizon_; }
  const Vector& base() const { return base_; }
  const Matrix& table() const { return table_; }

  /// r(p) for any 0 <= p <= horizon; for p < degree this is the unit
  /// vector e_p. Throws kHorizonExceeded beyond the table.
  Vector coefficients(int p) const;

  /// Applies one recursion step to the coefficient vector of s^p.
  static Vector step(const Vector& base, const Vector& current);

 private:
  Vector base_;
  int horizon_ = 0;
  Matrix table_;
};

/// Finite power expansion of a square matrix through the coefficients of
/// its minimal polynomial (degree mu) and its characteristic polynomial
/// (degree n). Immutable after construction.
class MinimalExpansion {
 public:
  int n() const { return n_; }
  int mu() const { return minimal_.degree(); }
  int horizon() const { return minimal_.horizon(); }
  double rank_tolerance() const { return rank_tolerance_; }

  /// a_k(p), k < mu, for mu <= p <= horizon.
  Vector a(int p) const;
  /// abar_k(n), k < n: A^n = sum_k abar_k(n) A^k.
  const Vector& a_char() const { return characteristic_.base(); }

  const PowerReduction& minimal() const { return minimal_; }
  const PowerReduction& characteristic() const { return characteristic_; }

  /// sigma_min / sigma_max of the normalized power basis {I, ..., A^m} for
  /// m = 1..mu; the last entry is the one that decided mu.
  const std::vector<double>& singular_ratios() const { return ratios_; }

  /// Relative residual of the least-squares fit A^mu = sum a_k(mu) A^k.
  double fit_residual() const { return fit_residual_; }

 private:
  friend MinimalExpansion minimal_expansion(const Eigen::Ref<const Matrix>&,
                                            int, double);
  int n_ = 0;
  double rank_tolerance_ = kDefaultRankTolerance;
  double fit_residual_ = 0.0;
  PowerReduction minimal_;
  PowerReduction characteristic_;
  std::vector<double> ratios_;
};

/// Safety factor around the rank threshold: a singular-value ratio within
/// [tol / factor, tol * factor] at the mu decision is reported as
/// kNumericalRankAmbiguous.
inline constexpr double kRankSafetyFactor = 100.0;

/// Builds the expansion of `a`, with coefficient tables up to `horizon`.
/// Throws kNonSquare, kNonFinite, kInvalidArgument, kNumericalRankAmbiguous
/// or kCoefficientResidual.
MinimalExpansion minimal_expansion(const Eigen::Ref<const Matrix>& a,
                                   int horizon,
                                   double tol = kDefaultRankTolerance);

/// A^p via sum_{k<mu} a_k(p) A^k for p >= mu; the literal power otherwise.
Matrix power_via_expansion(const MinimalExpansion& expansion,
                           const Eigen::Ref<const Matrix>& a, int p);

/// Max over k of |closed form - table| where the closed form is
///   a_k(mu+q) = c^q a_k(mu) + sum_{i<q} c^i a_{k-1}(mu+q-i-1),
///   c = a_{mu-1}(mu), q = p - mu.
/// This closed form unrolls r_k(p+1) = c r_k(p) + r_{k-1}(p), which only
/// matches the true recursion when mu == 1 or the coefficients vanish; for
/// A = diag(1, 2) and p = 4 the residual is 4.
double closed_form_check(const MinimalExpansion& expansion, int p);

/// Max over k of |unrolled form - table| where the unrolled form expands
/// the true recursion along k:
///   a_k(mu+q) = sum_{i<=min(k,q-1)} a_{mu-1}(mu+q-1-i) a_{k-i}(mu)
///               + [q <= k] a_{k-q}(mu).
double unrolled_form_check(const MinimalExpansion& expansion, int p);

}  // namespace fracsys
