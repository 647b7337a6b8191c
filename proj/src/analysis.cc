#include "fracsys/analysis.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fracsys/errors.h"

namespace fracsys {
namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

std::vector<Complex> merged_eigenvalues(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "eigenvalue iteration did not converge");
  }
  std::vector<Complex> raw(solver.eigenvalues().begin(),
                           solver.eigenvalues().end());
  std::vector<bool> used(raw.size(), false);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Complex sum = raw[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (!used[j] &&
          std::abs(raw[j] - raw[i]) <= 1e-6 * (1.0 + std::abs(raw[i]))) {
        used[j] = true;
        sum += raw[j];
        ++count;
      }
    }
    out.push_back(sum / static_cast<double>(count));
  }
  return out;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

void check_horizon(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::kInvalidArgument, "horizon must be positive and finite");
  }
}

}  // namespace

Matrix observability_matrix(const Matrix& a, const Matrix& c, int p) {
  if (a.rows() != a.cols()) fail(ErrorCode::kNonSquare, "A must be square");
  if (c.cols() != a.cols()) {
    fail(ErrorCode::kDimensionMismatch, "C must have as many columns as A");
  }
  if (p < 1) fail(ErrorCode::kInvalidArgument, "p must be >= 1");
  const Eigen::Index s = c.rows();
  Matrix out(p * s, a.cols());
  Matrix block = c;
  for (int i = 0; i < p; ++i) {
    out.middleRows(i * s, s) = block;
    if (i + 1 < p) block = block * a;
  }
  return out;
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b, int p) {
  if (a.rows() != a.cols()) fail(ErrorCode::kNonSquare, "A must be square");
  if (b.rows() != a.rows()) {
    fail(ErrorCode::kDimensionMismatch, "B must have as many rows as A");
  }
  if (p < 1) fail(ErrorCode::kInvalidArgument, "p must be >= 1");
  const Eigen::Index m = b.cols();
  Matrix out(a.rows(), p * m);
  Matrix block = b;
  for (int i = 0; i < p; ++i) {
    out.middleCols(i * m, m) = block;
    if (i + 1 < p) block = a * block;
  }
  return out;
}

bool rank_test(const Matrix& m, int n, double tol) {
  if (m.size() == 0) return n == 0;
  return numerical_rank(m, tol) == n;
}

bool pbh_test(const Matrix& a, const Matrix& m, Property mode, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) fail(ErrorCode::kNonSquare, "A must be square");
  const bool obs = mode == Property::kObservability;
  // Observability uses the dual pencil [lambda I - A^T : C^T].
  const Matrix base = obs ? Matrix(a.transpose()) : a;
  const Matrix extra = obs ? Matrix(m.transpose()) : m;
  if (extra.rows() != n) {
    fail(ErrorCode::kDimensionMismatch, "PBH input has wrong dimensions");
  }
  for (const Complex& lambda : merged_eigenvalues(a)) {
    ComplexMatrix pencil(n, n + extra.cols());
    pencil.leftCols(n) = -base.cast<Complex>();
    pencil.leftCols(n).diagonal().array() += lambda;
    pencil.rightCols(extra.cols()) = extra.cast<Complex>();
    Eigen::JacobiSVD<ComplexMatrix> svd(pencil);
    const Vector s = svd.singularValues();
    if (s.size() < n || s(0) == 0.0) return false;
    if (s(n - 1) <= tol * s(0)) return false;
  }
  return true;
}

Matrix observability_gramian(const EvolutionOperators& ops, double t,
                             const QuadratureSpec& quad) {
  check_horizon(t);
  const CaputoSystem& sys = ops.system();
  const int n = sys.n();
  const int k = sys.k();
  const Matrix ctc = sys.C().transpose() * sys.C();
  const Integrand integrand = [&](double tau) -> Matrix {
    Matrix psi(n, k * n);
    double tau_power = 1.0;
    for (int j = 0; j < k; ++j) {
      psi.middleCols(j * n, n) = tau_power * ops.phi_alpha_j(j, tau);
      tau_power *= tau;
    }
    return psi.transpose() * ctc * psi;
  };
  const double alpha = sys.alpha();
  const Grading grading =
      (alpha == std::round(alpha)) ? Grading::kNone : Grading::kLeft;
  const Matrix w = integrate(integrand, 0.0, t, {}, grading, quad);
  return (w + w.transpose()) / 2.0;
}

Matrix controllability_gramian(const EvolutionOperators& ops, double t,
                               const QuadratureSpec& quad) {
  check_horizon(t);
  const CaputoSystem& sys = ops.system();
  const double alpha = sys.alpha();
  const Matrix& b = sys.B();
  const Integrand integrand = [&](double sigma) -> Matrix {
    const Matrix kb = ops.kernel_at(sigma) * b;
    return kb * kb.transpose() / alpha;
  };
  const Matrix w =
      integrate(integrand, 0.0, std::pow(t, alpha), {}, Grading::kNone, quad);
  return (w + w.transpose()) / 2.0;
}

Definiteness gramian_definiteness(const Matrix& w, double tol) {
  Definiteness out;
  if (w.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "Gramian eigenvalues did not converge");
  }
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.max_eigenvalue = solver.eigenvalues().maxCoeff();
  out.positive = out.max_eigenvalue > 0.0 &&
                 out.min_eigenvalue > tol * out.max_eigenvalue;
  return out;
}

ControlSignal min_energy_signal(const EvolutionOperators& ops,
                                const Vector& gain, double horizon) {
  const CaputoSystem& sys = ops.system();
  const Matrix bt = sys.B().transpose();
  return ControlSignal(sys.m(), [&ops, bt, gain, horizon](double tau) {
    const double lag = std::max(horizon - tau, 0.0);
    return Vector(bt * (ops.phi_alpha(lag).transpose() * gain));
  });
}

ControlPlan min_energy_control(const EvolutionOperators& ops,
                               const Vector& target, const InitialData& x0,
                               double t, const std::vector<double>& grid,
                               const QuadratureSpec& quad) {
  check_horizon(t);
  const CaputoSystem& sys = ops.system();
  if (target.size() != sys.n()) {
    fail(ErrorCode::kDimensionMismatch, "target has wrong length");
  }
  require_finite(target, "target");
  x0.validate(sys.k(), sys.n());

  ControlPlan plan;
  plan.target = target;
  plan.horizon = t;
  const Matrix w = controllability_gramian(ops, t, quad);
  plan.gramian = gramian_definiteness(w);
  if (!plan.gramian.positive) {
    std::ostringstream os;
    os << "controllability Gramian at t = " << t << " has eigenvalues in ["
       << plan.gramian.min_eigenvalue << ", " << plan.gramian.max_eigenvalue
       << "]; the system is not controllable at tolerance "
       << kGramianTolerance;
    fail(ErrorCode::kGramianSingular, os.str());
  }
  const Vector shift = target - solve_homogeneous(ops, x0, t);
  plan.gain = w.llt().solve(shift);

  const ControlSignal u = min_energy_signal(ops, plan.gain, t);
  plan.grid = grid;
  for (double tau : grid) {
    if (!(tau >= 0.0 && tau <= t)) {
      fail(ErrorCode::kInvalidArgument, "control grid must lie in [0, t]");
    }
    plan.values.push_back(u(tau));
  }
  plan.reached = solve_forced(ops, x0, u, t, quad);
  plan.terminal_error =
      (plan.reached - target).norm() / std::max(target.norm(), 1.0);
  return plan;
}

std::string StructuralReport::describe() const {
  std::ostringstream os;
  os << "n=" << n << " mu=" << mu << " alpha=" << alpha << " t=" << horizon
     << " rank_tol=" << tolerances.rank << " gramian_tol=" << tolerances.gramian
     << "\n  observability: rank=" << observable_rank
     << " pbh=" << observable_pbh << " gramian=" << observable_gramian
     << " (lambda in [" << observability_gramian.min_eigenvalue << ", "
     << observability_gramian.max_eigenvalue << "]) dims=" << observability_dims
     << "\n  controllability: rank=" << controllable_rank
     << " pbh=" << controllable_pbh << " gramian=" << controllable_gramian
     << " (lambda in [" << controllability_gramian.min_eigenvalue << ", "
     << controllability_gramian.max_eigenvalue
     << "]) dims=" << controllability_dims;
  return os.str();
}

StructuralReport structural_tests(const EvolutionOperators& ops, double t,
                                  const QuadratureSpec& quad,
                                  const StructuralTolerances& tol) {
  check_horizon(t);
  const CaputoSystem& sys = ops.system();
  StructuralReport r;
  r.n = sys.n();
  r.mu = ops.expansion().mu();
  r.alpha = sys.alpha();
  r.horizon = t;
  r.tolerances = tol;
  const Matrix& a = sys.A();

  r.observable_rank =
      sys.s() > 0 && rank_test(observability_matrix(a, sys.C(), r.mu), r.n,
                                 tol.rank);
  r.observable_pbh =
      sys.s() > 0 && pbh_test(a, sys.C(), Property::kObservability, tol.rank);
  r.observability_gramian =
      gramian_definiteness(observability_gramian(ops, t, quad), tol.gramian);
  r.observable_gramian = r.observability_gramian.positive;

  r.controllable_rank =
      sys.m() > 0 && rank_test(controllability_matrix(a, sys.B(), r.mu), r.n,
                                   tol.rank);
  r.controllable_pbh =
      sys.m() > 0 && pbh_test(a, sys.B(), Property::kControllability, tol.rank);
  r.controllability_gramian =
      gramian_definiteness(controllability_gramian(ops, t, quad), tol.gramian);
  r.controllable_gramian = r.controllability_gramian.positive;

  r.observability_dims = sys.s() > 0 && r.mu >= ceil_div(r.n, sys.s());
  r.controllability_dims = sys.m() > 0 && r.mu >= ceil_div(r.n, sys.m());
  return r;
}

StructuralReport structural_report(const CaputoSystem& system, double t,
                                   const QuadratureSpec& quad,
                                   const StructuralTolerances& tol) {
  const EvolutionOperators ops(system, {}, tol.rank);
  StructuralReport r = structural_tests(ops, t, quad, tol);
  const bool obs_agree = r.observable_rank == r.observable_pbh &&
                         r.observable_rank == r.observable_gramian &&
                         (r.observability_dims || !r.observable_rank);
  const bool ctrl_agree = r.controllable_rank == r.controllable_pbh &&
                          r.controllable_rank == r.controllable_gramian &&
                          (r.controllability_dims || !r.controllable_rank);
  if (!obs_agree || !ctrl_agree) {
    fail(ErrorCode::kTestDisagreement,
         "equivalent tests disagree; check tolerances\n" + r.describe());
  }
  return r;
}

}  // namespace fracsys
