#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fracsys/fractional.h"

namespace fracsys {

/// Returned by max_eigenfrequency when every eigenvalue is real.
inline constexpr double kInfiniteFrequency =
    std::numeric_limits<double>::infinity();

/// Window width used when omega is infinite.
inline constexpr double kDefaultWindow = 1.0;

/// max |Im lambda| over the eigenvalues of A; kInfiniteFrequency when all
/// eigenvalues are real (imaginary parts below 1e-6 (1 + |lambda|)).
double max_eigenfrequency(const Matrix& a);

struct SamplingPlan {
  /// Strictly increasing, positive.
  std::vector<double> instants;
  double eta = 0.0;
  double omega = kInfiniteFrequency;
  /// Span used in place of pi/omega when omega is infinite.
  double window = kDefaultWindow;
  /// Optional per-component counts n_i for the reduced scheme; component i
  /// uses the first n_i instants of the shared pool.
  std::vector<int> per_component;

  int count() const { return static_cast<int>(instants.size()); }
  double width() const;
  void validate() const;
};

/// `count` instants in [eta, eta + pi/omega), or [eta, eta + window) when
/// omega is infinite, sorted, with every gap >= width / (10 count). Draws
/// are uniform from a seeded mt19937_64; after 1000 rejected draws a
/// stratified jitter plan is used instead.
SamplingPlan propose_instants(double omega, double eta, int count,
                              std::uint64_t seed,
                              double window = kDefaultWindow);

/// Omega: for every instant the s x kn block
/// [sum_l beta_{a0l}(t) C A^l, ..., t^{k-1} sum_l beta_{a,k-1,l}(t) C A^l],
/// i.e. the beta row of the instant times BlockDiag(Ob(A, C, p)) k-fold.
/// p = mu for Basis::kMinimal, n for Basis::kCharacteristic.
Matrix build_observation_operator(const EvolutionOperators& ops,
                                  const std::vector<double>& instants,
                                  Basis basis = Basis::kMinimal);

struct ReconstructionResult {
  Vector x0_hat;
  double residual = 0.0;
  double condition_number = 0.0;
  int sample_count = 0;
  int rank = 0;
};

struct LeastSquaresOptions {
  double rank_tol = kDefaultRankTolerance;
  /// Solve (Omega^T Omega) x = Omega^T y by Cholesky instead of QR.
  bool normal_equations = false;
};

/// Least-squares x0 from stacked samples y = (y(t_1); y(t_2); ...).
/// Throws kRankDeficient when the numerical rank of Omega is below its
/// column count.
ReconstructionResult reconstruct_x0(const Matrix& omega, const Vector& samples,
                                    const LeastSquaresOptions& options = {});

/// y_raw - C int_0^t (t-tau)^{alpha-1} Phi_alpha(t-tau) B u(tau) dtau.
Vector forced_sample_adjust(const EvolutionOperators& ops,
                            const ControlSignal& u, double t,
                            const Vector& y_raw,
                            const QuadratureSpec& quad = {});

/// Per-component scheme: component i of the output is sampled at the first
/// plan.per_component[i] instants, sum n_i = kn. samples[i] holds those n_i
/// values. Solves the square system beta_hat G x0 = y with beta_hat block
/// diagonal over components and G = [G_1; ...; G_s],
/// G_i = BlockDiag(Ob(A, C_i, mu)) k-fold. Throws kSingularCoefficientMatrix
/// when that system is numerically singular.
ReconstructionResult reduced_reconstruct(const EvolutionOperators& ops,
                                         const SamplingPlan& plan,
                                         const std::vector<Vector>& samples,
                                         double rank_tol = kDefaultRankTolerance);

/// The square coefficient matrix of the reduced scheme (kn x kn).
Matrix reduced_operator(const EvolutionOperators& ops, const SamplingPlan& plan);

struct SampledControllability {
  bool nonsingular = false;
  double condition_number = 0.0;
  /// Column j is (gamma_0(t_j); ...; gamma_{p-1}(t_j)), each gamma_i in R^m.
  Matrix gamma;
};

/// gamma_i(t_j) = int_0^{t_j} (t_j-tau)^{alpha-1} beta_{alpha i}(t_j-tau, p)
/// u(tau) dtau for the plan's p m instants.
SampledControllability sampled_controllability_check(
    const EvolutionOperators& ops, const ControlSignal& u,
    const SamplingPlan& plan, Basis basis = Basis::kMinimal,
    const QuadratureSpec& quad = {}, double rank_tol = kDefaultRankTolerance);

struct SearchResult {
  SamplingPlan plan;
  double condition_number = 0.0;
  /// cond(Omega) of every candidate, infinite when rank-deficient.
  std::vector<double> candidates;
};

/// Seed of trial i: the master seed for i = 0, a splitmix64 derivative after.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Draws `trials` plans of `count` instants (p k when 0) in
/// [eta, eta + pi/omega), omega from the eigenvalues of A, and keeps the one
/// with the smallest cond(Omega).
/// Throws kAllCandidatesSingular when every candidate is rank-deficient.
SearchResult conditioning_search(const EvolutionOperators& ops, int trials,
                                 std::uint64_t seed, double eta = 0.1,
                                 Basis basis = Basis::kMinimal,
                                 double window = kDefaultWindow,
                                 int count = 0);

}  // namespace fracsys
