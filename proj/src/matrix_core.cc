#include "fracsys/matrix_core.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fracsys/errors.h"

namespace fracsys {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view name) {
  if (!m.allFinite()) {
    fail(ErrorCode::kNonFinite,
         std::string(name) + " contains NaN or infinite entries");
  }
}

int numerical_rank(const Eigen::Ref<const Matrix>& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double threshold = tol * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++rank;
  }
  return rank;
}

double condition_number(const Eigen::Ref<const Matrix>& m) {
  // Wide matrices have a nontrivial null space.
  if (m.size() == 0 || m.rows() < m.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

PowerReduction::PowerReduction(Vector base, int horizon)
    : base_(std::move(base)), horizon_(horizon) {
  const int d = degree();
  if (d < 1) fail(ErrorCode::kInvalidArgument, "reduction degree must be >= 1");
  if (horizon_ < d) {
    fail(ErrorCode::kInvalidArgument, "reduction horizon below its degree");
  }
  table_.resize(horizon_ - d + 1, d);
  Vector row = base_;
  table_.row(0) = row.transpose();
  for (int p = d + 1; p <= horizon_; ++p) {
    row = step(base_, row);
    table_.row(p - d) = row.transpose();
  }
}

Vector PowerReduction::step(const Vector& base, const Vector& current) {
  const Eigen::Index d = base.size();
  Vector next(d);
  const double lead = current(d - 1);
  next(0) = lead * base(0);
  for (Eigen::Index k = 1; k < d; ++k) {
    next(k) = current(k - 1) + lead * base(k);
  }
  return next;
}

Vector PowerReduction::coefficients(int p) const {
  if (p < 0) fail(ErrorCode::kInvalidArgument, "negative power");
  if (p > horizon_) {
    std::ostringstream os;
    os << "power " << p << " beyond coefficient horizon " << horizon_;
    fail(ErrorCode::kHorizonExceeded, os.str());
  }
  const int d = degree();
  if (p < d) return Vector::Unit(d, p);
  return table_.row(p - d).transpose();
}

Vector MinimalExpansion::a(int p) const {
  if (p < mu()) {
    fail(ErrorCode::kInvalidArgument,
         "minimal coefficients are defined for p >= mu");
  }
  return minimal_.coefficients(p);
}

namespace {

// Coefficients c_k of s^n = sum_k c_k s^k from the eigenvalues of a.
Vector characteristic_coefficients(const Eigen::Ref<const Matrix>& a) {
  const Eigen::Index n = a.rows();
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "eigenvalues of A did not converge");
  }
  // poly holds the monic product prod (s - lambda_i), lowest degree first.
  Eigen::VectorXcd poly = Eigen::VectorXcd::Zero(n + 1);
  poly(0) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lambda = es.eigenvalues()(i);
    for (Eigen::Index k = i + 1; k >= 1; --k) {
      poly(k) = poly(k - 1) - lambda * poly(k);
    }
    poly(0) = -lambda * poly(0);
  }
  Vector c(n);
  for (Eigen::Index k = 0; k < n; ++k) c(k) = -poly(k).real();
  return c;
}

}  // namespace

MinimalExpansion minimal_expansion(const Eigen::Ref<const Matrix>& a,
                                   int horizon, double tol) {
  if (a.rows() != a.cols()) {
    fail(ErrorCode::kNonSquare, "A must be square");
  }
  if (a.rows() == 0) fail(ErrorCode::kInvalidArgument, "A is empty");
  require_finite(a, "A");
  const int n = static_cast<int>(a.rows());
  if (horizon < n) {
    fail(ErrorCode::kInvalidArgument, "horizon must be at least n");
  }
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");

  MinimalExpansion out;
  out.n_ = n;
  out.rank_tolerance_ = tol;

  // Columns are vec(A^m) / ||A^m||_F; a vanishing power is dependent outright.
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix basis(nn, n + 1);
  Vector norms(n + 1);
  Matrix power = Matrix::Identity(n, n);
  basis.col(0) = power.reshaped() / power.norm();
  norms(0) = power.norm();

  int mu = -1;
  for (int m = 1; m <= n; ++m) {
    power = power * a;
    const double norm = power.norm();
    norms(m) = norm;
    double ratio = 0.0;
    if (norm > 0.0) {
      basis.col(m) = power.reshaped() / norm;
      // More columns than entries (n = 1) leaves the last one dependent.
      if (m + 1 <= nn) {
        Eigen::JacobiSVD<Matrix> svd(basis.leftCols(m + 1));
        const Vector& s = svd.singularValues();
        ratio = s(m) / s(0);
      }
    } else {
      basis.col(m).setZero();
    }
    out.ratios_.push_back(ratio);
    if (ratio <= tol) {
      if (ratio > tol / kRankSafetyFactor) {
        std::ostringstream os;
        os << "singular-value ratio " << ratio << " at degree " << m
           << " is within a factor " << kRankSafetyFactor
           << " of the threshold " << tol;
        fail(ErrorCode::kNumericalRankAmbiguous, os.str());
      }
      mu = m;
      break;
    }
    if (ratio < tol * kRankSafetyFactor) {
      std::ostringstream os;
      os << "singular-value ratio " << ratio << " at degree " << m
         << " is within a factor " << kRankSafetyFactor
         << " of the threshold " << tol;
      fail(ErrorCode::kNumericalRankAmbiguous, os.str());
    }
  }
  if (mu < 0) {
    fail(ErrorCode::kNumericalRankAmbiguous,
         "powers up to A^n were judged independent; A is too ill-conditioned "
         "for the requested tolerance");
  }

  Vector coeffs = Vector::Zero(mu);
  double residual = 0.0;
  if (norms(mu) > 0.0) {
    // Solve in the normalized basis, then undo the column scaling.
    const Matrix lhs = basis.leftCols(mu);
    const Vector rhs = basis.col(mu);
    Vector scaled = lhs.colPivHouseholderQr().solve(rhs);
    for (int k = 0; k < mu; ++k) coeffs(k) = scaled(k) * norms(mu) / norms(k);
    residual = (lhs * scaled - rhs).norm();
  }
  if (residual > 1e-6) {
    std::ostringstream os;
    os << "relative residual " << residual
       << " of the minimal-polynomial fit exceeds 1e-6";
    fail(ErrorCode::kCoefficientResidual, os.str());
  }
  out.fit_residual_ = residual;
  out.minimal_ = PowerReduction(coeffs, horizon);
  if (mu == n) {
    out.characteristic_ = out.minimal_;
  } else {
    out.characteristic_ = PowerReduction(characteristic_coefficients(a), horizon);
  }
  return out;
}

Matrix power_via_expansion(const MinimalExpansion& expansion,
                           const Eigen::Ref<const Matrix>& a, int p) {
  if (a.rows() != expansion.n() || a.cols() != expansion.n()) {
    fail(ErrorCode::kDimensionMismatch, "A does not match the expansion");
  }
  if (p < 0) fail(ErrorCode::kInvalidArgument, "negative power");
  const int n = expansion.n();
  if (p < expansion.mu()) {
    Matrix out = Matrix::Identity(n, n);
    for (int i = 0; i < p; ++i) out = out * a;
    return out;
  }
  const Vector c = expansion.a(p);
  Matrix out = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  for (int k = 0; k < expansion.mu(); ++k) {
    out += c(k) * power;
    power = power * a;
  }
  return out;
}

namespace {

void check_closed_form_range(const MinimalExpansion& expansion, int p) {
  if (p < expansion.mu()) {
    fail(ErrorCode::kInvalidArgument, "closed form requires p >= mu");
  }
  if (p > expansion.horizon()) {
    std::ostringstream os;
    os << "power " << p << " beyond coefficient horizon "
       << expansion.horizon();
    fail(ErrorCode::kHorizonExceeded, os.str());
  }
}

}  // namespace

double closed_form_check(const MinimalExpansion& expansion, int p) {
  check_closed_form_range(expansion, p);
  const int mu = expansion.mu();
  const int q = p - mu;
  const Vector base = expansion.a(mu);
  const double c = base(mu - 1);
  const Vector table = expansion.a(p);
  double worst = 0.0;
  for (int k = 0; k < mu; ++k) {
    double value = std::pow(c, q) * base(k);
    if (k >= 1) {
      double c_pow = 1.0;
      for (int i = 0; i < q; ++i) {
        value += c_pow * expansion.a(mu + q - i - 1)(k - 1);
        c_pow *= c;
      }
    }
    worst = std::max(worst, std::abs(value - table(k)));
  }
  return worst;
}

double unrolled_form_check(const MinimalExpansion& expansion, int p) {
  check_closed_form_range(expansion, p);
  const int mu = expansion.mu();
  const int q = p - mu;
  const Vector base = expansion.a(mu);
  const Vector table = expansion.a(p);
  double worst = 0.0;
  for (int k = 0; k < mu; ++k) {
    double value = 0.0;
    for (int i = 0; i <= std::min(k, q - 1); ++i) {
      value += expansion.a(mu + q - 1 - i)(mu - 1) * base(k - i);
    }
    if (q <= k) value += base(k - q);
    worst = std::max(worst, std::abs(value - table(k)));
  }
  return worst;
}

}  // namespace fracsys
