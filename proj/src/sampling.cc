#include "fracsys/sampling.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fracsys/analysis.h"
#include "fracsys/errors.h"

namespace fracsys {
namespace {

constexpr int kMaxPlanDraws = 1000;

double unit_draw(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double min_gap(const std::vector<double>& sorted) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    gap = std::min(gap, sorted[i] - sorted[i - 1]);
  }
  return gap;
}

// Row block of one instant: [beta_{a00}(t) I_s ... t^{k-1} beta_{a,k-1,p-1}(t) I_s]
// times BlockDiag(Ob(A, c, p)) k-fold, with c any subset of the rows of C.
Matrix instant_block(const EvolutionOperators& ops, const Matrix& ob,
                     int rows, double t, Basis basis) {
  const CaputoSystem& sys = ops.system();
  const int n = sys.n();
  const int k = sys.k();
  const int p = static_cast<int>(ob.rows()) / std::max(rows, 1);
  Matrix beta_row = Matrix::Zero(rows, k * p * rows);
  double t_power = 1.0;
  for (int j = 0; j < k; ++j) {
    const Vector beta = ops.beta_j(j, t, basis);
    for (int l = 0; l < p; ++l) {
      beta_row.block(0, (j * p + l) * rows, rows, rows) =
          t_power * beta(l) * Matrix::Identity(rows, rows);
    }
    t_power *= t;
  }
  Matrix g = Matrix::Zero(k * p * rows, k * n);
  for (int j = 0; j < k; ++j) {
    g.block(j * p * rows, j * n, p * rows, n) = ob;
  }
  return beta_row * g;
}

int basis_degree(const EvolutionOperators& ops, Basis basis) {
  return basis == Basis::kMinimal ? ops.expansion().mu() : ops.system().n();
}

void check_instants(const std::vector<double>& instants) {
  for (std::size_t i = 0; i < instants.size(); ++i) {
    if (!(instants[i] > 0.0) || !std::isfinite(instants[i])) {
      fail(ErrorCode::kInvalidArgument, "sampling instants must be positive");
    }
    if (i > 0 && !(instants[i] > instants[i - 1])) {
      fail(ErrorCode::kInvalidArgument,
           "sampling instants must be strictly increasing");
    }
  }
}

}  // namespace

double max_eigenfrequency(const Matrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::kNonSquare, "A must be square");
  require_finite(a, "A");
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "eigenvalue iteration did not converge");
  }
  double omega = 0.0;
  for (const auto& lambda : solver.eigenvalues()) {
    if (std::abs(lambda.imag()) > 1e-6 * (1.0 + std::abs(lambda))) {
      omega = std::max(omega, std::abs(lambda.imag()));
    }
  }
  return omega > 0.0 ? omega : kInfiniteFrequency;
}

double SamplingPlan::width() const {
  return std::isfinite(omega) && omega > 0.0 ? std::numbers::pi / omega
                                              : window;
}

void SamplingPlan::validate() const {
  check_instants(instants);
  for (int n_i : per_component) {
    if (n_i < 0) fail(ErrorCode::kInvalidArgument, "negative component count");
    if (n_i > count()) {
      fail(ErrorCode::kInvalidArgument,
           "component count exceeds the shared instant pool");
    }
  }
}

SamplingPlan propose_instants(double omega, double eta, int count,
                              std::uint64_t seed, double window) {
  if (count < 1) fail(ErrorCode::kInvalidArgument, "count must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    fail(ErrorCode::kInvalidArgument, "eta must be positive");
  }
  if (!(omega > 0.0)) omega = kInfiniteFrequency;
  if (!(window > 0.0) || !std::isfinite(window)) {
    fail(ErrorCode::kInvalidArgument, "window must be positive");
  }
  SamplingPlan plan;
  plan.eta = eta;
  plan.omega = omega;
  plan.window = window;
  const double width =
      std::isfinite(omega) ? std::numbers::pi / omega : window;
  const double gap = width / (10.0 * count);

  std::mt19937_64 engine(seed);
  std::vector<double> draw(count);
  for (int attempt = 0; attempt < kMaxPlanDraws; ++attempt) {
    for (double& t : draw) t = eta + width * unit_draw(engine);
    std::sort(draw.begin(), draw.end());
    if (min_gap(draw) >= gap && draw.back() < eta + width) {
      plan.instants = draw;
      return plan;
    }
  }
  // Stratified jitter: one instant in the middle 80% of each of count cells.
  for (int i = 0; i < count; ++i) {
    draw[i] = eta + width * (i + 0.1 + 0.8 * unit_draw(engine)) / count;
  }
  plan.instants = draw;
  return plan;
}

Matrix build_observation_operator(const EvolutionOperators& ops,
                                  const std::vector<double>& instants,
                                  Basis basis) {
  check_instants(instants);
  if (instants.empty()) fail(ErrorCode::kInvalidArgument, "no instants");
  const CaputoSystem& sys = ops.system();
  const int s = sys.s();
  const int p = basis_degree(ops, basis);
  const Matrix ob = observability_matrix(sys.A(), sys.C(), p);
  Matrix omega(static_cast<Eigen::Index>(instants.size()) * s,
               sys.k() * sys.n());
  for (std::size_t i = 0; i < instants.size(); ++i) {
    omega.middleRows(i * s, s) = instant_block(ops, ob, s, instants[i], basis);
  }
  return omega;
}

ReconstructionResult reconstruct_x0(const Matrix& omega, const Vector& samples,
                                    const LeastSquaresOptions& options) {
  if (samples.size() != omega.rows()) {
    fail(ErrorCode::kDimensionMismatch, "sample vector length differs from Omega");
  }
  require_finite(samples, "samples");
  require_finite(omega, "Omega");
  ReconstructionResult out;
  out.sample_count = static_cast<int>(samples.size());
  out.rank = numerical_rank(omega, options.rank_tol);
  if (omega.rows() < omega.cols() || out.rank < omega.cols()) {
    std::ostringstream os;
    os << "Omega has numerical rank " << out.rank << " but " << omega.cols()
       << " unknowns (" << omega.rows() << " rows)";
    fail(ErrorCode::kRankDeficient, os.str());
  }
  out.condition_number = condition_number(omega);
  if (options.normal_equations) {
    const Matrix normal = omega.transpose() * omega;
    out.x0_hat = normal.llt().solve(omega.transpose() * samples);
  } else {
    out.x0_hat = omega.colPivHouseholderQr().solve(samples);
  }
  out.residual = (samples - omega * out.x0_hat).norm();
  return out;
}

Vector forced_sample_adjust(const EvolutionOperators& ops,
                            const ControlSignal& u, double t,
                            const Vector& y_raw, const QuadratureSpec& quad) {
  const CaputoSystem& sys = ops.system();
  if (y_raw.size() != sys.s()) {
    fail(ErrorCode::kDimensionMismatch, "raw sample has wrong length");
  }
  if (!(t > 0.0)) fail(ErrorCode::kInvalidArgument, "t must be positive");
  const Vector forced =
      solve_forced(ops, InitialData::zero(sys.k(), sys.n()), u, t, quad);
  return y_raw - sys.C() * forced;
}

Matrix reduced_operator(const EvolutionOperators& ops,
                        const SamplingPlan& plan) {
  plan.validate();
  const CaputoSystem& sys = ops.system();
  const int s = sys.s();
  const int kn = sys.k() * sys.n();
  if (static_cast<int>(plan.per_component.size()) != s) {
    fail(ErrorCode::kDimensionMismatch, "need one instant count per output");
  }
  int total = 0;
  for (int n_i : plan.per_component) total += n_i;
  if (total != kn) {
    std::ostringstream os;
    os << "component counts sum to " << total << ", expected k n = " << kn;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const int mu = ops.expansion().mu();
  Matrix out(kn, kn);
  int row = 0;
  for (int i = 0; i < s; ++i) {
    const Matrix ob = observability_matrix(sys.A(), sys.C().row(i), mu);
    for (int j = 0; j < plan.per_component[i]; ++j) {
      out.row(row++) =
          instant_block(ops, ob, 1, plan.instants[j], Basis::kMinimal);
    }
  }
  return out;
}

ReconstructionResult reduced_reconstruct(const EvolutionOperators& ops,
                                         const SamplingPlan& plan,
                                         const std::vector<Vector>& samples,
                                         double rank_tol) {
  const Matrix g = reduced_operator(ops, plan);
  if (samples.size() != plan.per_component.size()) {
    fail(ErrorCode::kDimensionMismatch, "need one sample vector per output");
  }
  Vector y(g.rows());
  int row = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != plan.per_component[i]) {
      fail(ErrorCode::kDimensionMismatch,
           "component sample count differs from the plan");
    }
    y.segment(row, samples[i].size()) = samples[i];
    row += static_cast<int>(samples[i].size());
  }
  require_finite(y, "samples");
  ReconstructionResult out;
  out.sample_count = static_cast<int>(y.size());
  out.rank = numerical_rank(g, rank_tol);
  if (out.rank < g.cols()) {
    std::ostringstream os;
    os << "reduced coefficient matrix has numerical rank " << out.rank
       << " of " << g.cols() << "; choose other instants";
    fail(ErrorCode::kSingularCoefficientMatrix, os.str());
  }
  out.condition_number = condition_number(g);
  out.x0_hat = g.colPivHouseholderQr().solve(y);
  out.residual = (y - g * out.x0_hat).norm();
  return out;
}

SampledControllability sampled_controllability_check(
    const EvolutionOperators& ops, const ControlSignal& u,
    const SamplingPlan& plan, Basis basis, const QuadratureSpec& quad,
    double rank_tol) {
  plan.validate();
  const CaputoSystem& sys = ops.system();
  if (u.dim() != sys.m()) {
    fail(ErrorCode::kDimensionMismatch, "control dimension differs from B");
  }
  const int p = basis_degree(ops, basis);
  const int m = sys.m();
  const int size = p * m;
  if (plan.count() != size) {
    std::ostringstream os;
    os << "plan has " << plan.count() << " instants, need p m = " << size;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const double alpha = sys.alpha();
  SampledControllability out;
  out.gamma = Matrix::Zero(size, size);
  for (int j = 0; j < size; ++j) {
    const double t = plan.instants[j];
    std::vector<double> breaks;
    for (double tau : u.breakpoints()) {
      if (tau > 0.0 && tau < t) breaks.push_back(std::pow(t - tau, alpha));
    }
    const Integrand integrand = [&](double sigma) -> Matrix {
      const double lag = std::pow(sigma, 1.0 / alpha);
      const Vector beta = ops.beta_alpha(lag, basis);
      const Vector value = u(std::max(t - lag, 0.0));
      Matrix column(size, 1);
      for (int i = 0; i < p; ++i) {
        column.block(i * m, 0, m, 1) = beta(i) * value / alpha;
      }
      return column;
    };
    const Grading grading = (alpha == 1.0) ? Grading::kNone : Grading::kLeft;
    out.gamma.col(j) =
        integrate(integrand, 0.0, std::pow(t, alpha), breaks, grading, quad);
  }
  out.nonsingular = out.gamma.norm() > 0.0 &&
                    numerical_rank(out.gamma, rank_tol) == size;
  out.condition_number = condition_number(out.gamma);
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  if (trial == 0) return seed;
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SearchResult conditioning_search(const EvolutionOperators& ops, int trials,
                                 std::uint64_t seed, double eta, Basis basis,
                                 double window, int count) {
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (count < 0) fail(ErrorCode::kInvalidArgument, "count must be >= 0");
  const CaputoSystem& sys = ops.system();
  const double omega = max_eigenfrequency(sys.A());
  if (count == 0) count = basis_degree(ops, basis) * sys.k();
  SearchResult out;
  out.condition_number = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    SamplingPlan plan =
        propose_instants(omega, eta, count, trial_seed(seed, trial), window);
    const Matrix big_omega =
        build_observation_operator(ops, plan.instants, basis);
    const bool full =
        numerical_rank(big_omega, kDefaultRankTolerance) == big_omega.cols();
    const double cond = full ? condition_number(big_omega)
                             : std::numeric_limits<double>::infinity();
    out.candidates.push_back(cond);
    if (trial == 0 || cond < out.condition_number) {
      out.condition_number = cond;
      out.plan = std::move(plan);
    }
  }
  if (!std::isfinite(out.condition_number)) {
    std::ostringstream os;
    os << "all " << trials << " candidate plans give a rank-deficient Omega;"
       << " best attempt starts at t = " << out.plan.instants.front();
    fail(ErrorCode::kAllCandidatesSingular, os.str());
  }
  return out;
}

}  // namespace fracsys
