#pragma once

#include "fracsys/matrix_core.h"

namespace fracsys {

struct SeriesOptions {
  /// Relative size of a term, against the partial sum, below which the
  /// series counts as converged (three consecutive terms past the hump).
  double tol = 1e-16;
  /// Accepted rounding-error estimate relative to the result before the
  /// evaluation is repeated in a wider floating-point type.
  double cancellation_tol = 1e-13;
  int max_terms = 200000;
};

/// Diagnostics of one coefficient-series evaluation.
struct SeriesReport {
  int terms = 0;
  /// Decimal digits of the arithmetic that produced the accepted result
  /// (16 for double).
  int digits = 16;
};

/// Coefficients c_l, l < d, such that for every matrix A annihilated by the
/// polynomial of `reduction`, with z = t^alpha,
///   E_{alpha,beta}(z A) = sum_{i>=0} (z A)^i / Gamma(alpha i + beta)
///                       = sum_{l<d} c_l A^l.
/// The series is summed in the scaled basis (zA)^l, with Gamma ratios
/// taken from tgamma_delta_ratio so no factorial overflows. When the
/// estimated cancellation error exceeds options.cancellation_tol, the sum
/// is recomputed in MPFR with enough bits for the observed term growth,
/// doubling up to 4096 bits. Throws kSeriesDivergence past that, or when
/// the term count exceeds options.max_terms.
Vector mittag_leffler_coefficients(const PowerReduction& reduction,
                                   double alpha, double beta, double t,
                                   const SeriesOptions& options = {},
                                   SeriesReport* report = nullptr);

/// Scalar E_{alpha,beta}(x), through the same engine with d = 1.
double mittag_leffler(double alpha, double beta, double x,
                      const SeriesOptions& options = {});

}  // namespace fracsys
