#pragma once

#include <string>
#include <vector>

#include "fracsys/fractional.h"

namespace fracsys {

/// Rows C, CA, ..., CA^{p-1} (p s x n).
Matrix observability_matrix(const Matrix& a, const Matrix& c, int p);
/// Columns B, AB, ..., A^{p-1}B (n x p m).
Matrix controllability_matrix(const Matrix& a, const Matrix& b, int p);

/// Numerical rank of m (threshold tol * sigma_max) equals n.
bool rank_test(const Matrix& m, int n, double tol = kDefaultRankTolerance);

enum class Property { kObservability, kControllability };

/// rank [lambda I - A^T : C^T] = n (observability, m = C) or
/// rank [lambda I - A : B] = n (controllability, m = B) at every eigenvalue.
/// Eigenvalues closer than 1e-6 (1 + |lambda|) are merged first, so a
/// defective eigenvalue split by rounding is tested once at its mean.
bool pbh_test(const Matrix& a, const Matrix& m, Property mode,
              double tol = kDefaultRankTolerance);

/// int_0^t Psi^T C^T C Psi dtau, Psi = [Phi_{a0} : tau Phi_{a1} : ...]
/// (kn x kn, symmetrized).
Matrix observability_gramian(const EvolutionOperators& ops, double t,
                             const QuadratureSpec& quad = {});

/// int_0^t (t-tau)^{alpha-1} Phi_alpha(t-tau) B B^T Phi_alpha(t-tau)^T dtau
/// (n x n, symmetrized), integrated in sigma = (t-tau)^alpha.
Matrix controllability_gramian(const EvolutionOperators& ops, double t,
                               const QuadratureSpec& quad = {});

inline constexpr double kGramianTolerance = 1e-8;
inline constexpr double kDefaultHorizon = 1.0;

struct Definiteness {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Positive definite when lambda_min > tol * lambda_max (and lambda_max > 0).
Definiteness gramian_definiteness(const Matrix& w,
                                  double tol = kGramianTolerance);

struct ControlPlan {
  Vector target;
  double horizon = 0.0;
  /// K = W^{-1}(x* - sum_j t^j Phi_{aj}(t) x_{0j}); u(tau) = B^T Phi_a(t-tau)^T K.
  Vector gain;
  std::vector<double> grid;
  std::vector<Vector> values;
  /// Terminal state from replaying the control through solve_forced.
  Vector reached;
  /// |reached - target| / max(|target|, 1).
  double terminal_error = 0.0;
  Definiteness gramian;
};

/// The minimum-energy input as a signal on [0, horizon]; keeps a reference
/// to `ops`.
ControlSignal min_energy_signal(const EvolutionOperators& ops,
                                const Vector& gain, double horizon);

/// Throws kGramianSingular when the controllability Gramian is not positive
/// definite at the working tolerance.
ControlPlan min_energy_control(const EvolutionOperators& ops,
                               const Vector& target, const InitialData& x0,
                               double t, const std::vector<double>& grid = {},
                               const QuadratureSpec& quad = {});

struct StructuralTolerances {
  /// Relative singular-value threshold of the rank and PBH tests.
  double rank = kDefaultRankTolerance;
  /// lambda_min / lambda_max threshold of the Gramian tests.
  double gramian = kGramianTolerance;
};

struct StructuralReport {
  int n = 0;
  int mu = 0;
  double alpha = 1.0;
  double horizon = kDefaultHorizon;
  StructuralTolerances tolerances;
  /// rank, PBH, Gramian.
  bool observable_rank = false;
  bool observable_pbh = false;
  bool observable_gramian = false;
  bool controllable_rank = false;
  bool controllable_pbh = false;
  bool controllable_gramian = false;
  /// mu >= ceil(n/s) and mu >= ceil(n/m).
  bool observability_dims = false;
  bool controllability_dims = false;
  Definiteness observability_gramian;
  Definiteness controllability_gramian;

  bool observable() const { return observable_rank; }
  bool controllable() const { return controllable_rank; }
  std::string describe() const;
};

/// Runs the three observability and three controllability tests and the
/// dimension conditions. Throws kTestDisagreement, with every raw number in
/// the message, when the verdicts of one property differ.
StructuralReport structural_report(const CaputoSystem& system,
                                   double t = kDefaultHorizon,
                                   const QuadratureSpec& quad = {},
                                   const StructuralTolerances& tol = {});

/// Same, without the agreement check.
StructuralReport structural_tests(const EvolutionOperators& ops, double t,
                                  const QuadratureSpec& quad = {},
                                  const StructuralTolerances& tol = {});

}  // namespace fracsys
