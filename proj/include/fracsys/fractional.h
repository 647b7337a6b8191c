#pragma once

#include <functional>
#include <vector>

#include "fracsys/expansion.h"
#include "fracsys/matrix_core.h"
#include "fracsys/mittag_leffler.h"
#include "fracsys/quadrature.h"

namespace fracsys {

/// Number of classical initial conditions for a Caputo derivative of order
/// alpha: alpha itself for integer orders, ceil(alpha) otherwise.
int initial_condition_count(double alpha);

/// D^alpha x = A x + B u, y = C x, with Caputo derivative of order alpha > 0.
class CaputoSystem {
 public:
  CaputoSystem(Matrix a, Matrix b, Matrix c, double alpha);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  double alpha() const { return alpha_; }
  int k() const { return k_; }
  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(b_.cols()); }
  int s() const { return static_cast<int>(c_.rows()); }

 private:
  Matrix a_;
  Matrix b_;
  Matrix c_;
  double alpha_;
  int k_;
};

/// x0[j] = x^{(j)}(0), j < k.
struct InitialData {
  std::vector<Vector> x0;

  static InitialData zero(int k, int n);
  /// Splits a stacked vector (x_00; x_01; ...) of length k n.
  static InitialData from_stacked(const Vector& stacked, int k);
  Vector stacked() const;
  void validate(int k, int n) const;
};

/// Bounded, piecewise-continuous input u: [0, inf) -> R^m. Breakpoints are
/// the instants where u may jump; quadrature panels are cut there.
class ControlSignal {
 public:
  using Evaluator = std::function<Vector(double)>;

  ControlSignal(int dim, Evaluator evaluator,
                std::vector<double> breakpoints = {});

  static ControlSignal zero(int dim);
  static ControlSignal constant(const Vector& value);
  /// `before` on [0, t0), `after` from t0 on.
  static ControlSignal step(const Vector& before, const Vector& after,
                            double t0);
  /// amplitude * sin(omega t + phase), componentwise.
  static ControlSignal sine(const Vector& amplitude, double omega,
                            double phase = 0.0);
  /// values[i] on [times[i], times[i+1]); times[0] must be 0 and the last
  /// value holds for all later t.
  static ControlSignal piecewise_constant(const std::vector<double>& times,
                                          const std::vector<Vector>& values);

  int dim() const { return dim_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  Vector operator()(double t) const;

 private:
  int dim_;
  Evaluator evaluator_;
  std::vector<double> breakpoints_;
};

/// Phi_{alpha j}(t) = E_{alpha,j+1}(A t^alpha) and
/// Phi_alpha(t) = E_{alpha,alpha}(A t^alpha), each evaluated as
/// sum_{l<p} beta_l(t) A^l over the minimal expansion of A.
class EvolutionOperators {
 public:
  explicit EvolutionOperators(CaputoSystem system,
                              SeriesOptions series = {},
                              double rank_tol = kDefaultRankTolerance);

  const CaputoSystem& system() const { return system_; }
  const MinimalExpansion& expansion() const { return expansion_; }
  const SeriesOptions& series() const { return series_; }
  /// A^l for l < n.
  const std::vector<Matrix>& powers() const { return powers_; }

  /// beta_{alpha j l}(t, p), l < p.
  Vector beta_j(int j, double t, Basis basis = Basis::kMinimal) const;
  /// beta_{alpha l}(t, p), the E_{alpha,alpha} coefficients.
  Vector beta_alpha(double t, Basis basis = Basis::kMinimal) const;

  Matrix phi_alpha_j(int j, double t) const;
  Matrix phi_alpha(double t) const;
  /// E_{alpha,alpha}(A sigma): Phi_alpha at t = sigma^{1/alpha}.
  Matrix kernel_at(double sigma) const;

  Matrix combine(const Vector& beta) const;

 private:
  CaputoSystem system_;
  SeriesOptions series_;
  MinimalExpansion expansion_;
  std::vector<Matrix> powers_;
};

/// x(t) = sum_j t^j Phi_{alpha j}(t) x_{0j}.
Vector solve_homogeneous(const EvolutionOperators& ops, const InitialData& x0,
                         double t);

/// Homogeneous part plus int_0^t (t-tau)^{alpha-1} Phi_alpha(t-tau) B u(tau)
/// dtau. The kernel singularity is absorbed by sigma = (t-tau)^alpha, which
/// leaves (1/alpha) int_0^{t^alpha} E_{alpha,alpha}(A sigma) B
/// u(t - sigma^{1/alpha}) dsigma.
Vector solve_forced(const EvolutionOperators& ops, const InitialData& x0,
                    const ControlSignal& u, double t,
                    const QuadratureSpec& quad = {},
                    QuadratureReport* report = nullptr);

/// y = C x.
Vector output(const CaputoSystem& system, const Vector& x);

}  // namespace fracsys
