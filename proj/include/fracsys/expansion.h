#pragma once

#include "fracsys/matrix_core.h"

namespace fracsys {

/// Which polynomial the expansion is built on: the minimal polynomial
/// (p = mu, unique coefficients) or the characteristic one (p = n).
enum class Basis { kMinimal, kCharacteristic };

enum class BetaPath { kSeries, kCompanion };

/// Coefficient functions beta_k(t, p), k < p, with e^{At} = sum beta_k A^k.
struct BetaSet {
  int p = 0;
  double t = 0.0;
  BetaPath path = BetaPath::kCompanion;
  Vector values;
};

const PowerReduction& reduction(const MinimalExpansion& expansion, Basis basis);

/// Companion matrix: ones on the subdiagonal, last column abar_k(p).
Matrix companion_matrix(const MinimalExpansion& expansion,
                        Basis basis = Basis::kMinimal);

/// Truncated series beta_k(t, mu) = t^k/k! + sum_{i>=mu} a_k(i) t^i / i!.
/// Stops once the largest term has stayed below `tol` for three consecutive
/// indices past mu + ceil(r t) + 10, r being a root bound of the minimal
/// polynomial. Throws kSeriesDivergence after 1000 consecutive growing terms.
BetaSet beta_series(const MinimalExpansion& expansion, double t,
                    double tol = 1e-17);

/// beta(t, p) = exp(Omega(p) t) e_1.
BetaSet beta_companion(const MinimalExpansion& expansion, double t,
                       Basis basis = Basis::kMinimal);

/// e^{At} as sum_{k<mu} beta_k(t, mu) A^k.
Matrix expm_via_expansion(const Eigen::Ref<const Matrix>& a,
                          const MinimalExpansion& expansion, double t,
                          BetaPath path = BetaPath::kCompanion);

/// Upper bound on the spectral radius of any matrix annihilated by the
/// polynomial s^d - sum base_k s^k (Fujiwara bound).
double root_bound(const Vector& base);

/// sum_k coeffs(k) A^k.
Matrix evaluate_polynomial(const Eigen::Ref<const Matrix>& a,
                           const Vector& coeffs);

}  // namespace fracsys
