#include "fracsys/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracsys/analysis.h"
#include "fracsys/errors.h"
#include "fracsys/sampling.h"

namespace fracsys {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Condition numbers above this get a warning next to the estimate.
constexpr double kConditionWarning = 1e6;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json split_x0(const Vector& stacked, int k) {
  json out = json::array();
  for (const Vector& v : InitialData::from_stacked(stacked, k).x0) {
    out.push_back(to_json(v));
  }
  return out;
}

json definiteness_json(const Definiteness& d) {
  return {{"positive", d.positive},
          {"min_eigenvalue", d.min_eigenvalue},
          {"max_eigenvalue", d.max_eigenvalue}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::kInvalidArgument, "write to " + path + " failed");
}

// Uniform grid of steps + 1 points on [0, t_end], the last one exact.
std::vector<double> uniform_grid(double t_end, int steps) {
  std::vector<double> grid(steps + 1);
  for (int i = 0; i <= steps; ++i) grid[i] = t_end * i / steps;
  grid.back() = t_end;
  return grid;
}

bool has_forcing(const SystemDefinition& def) {
  return def.control.has_value() && def.control_type != "zero";
}

struct Session {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  bool timing = false;
  Clock::time_point start = Clock::now();

  // Wraps a result in the run report and sends it to `path` or stdout.
  void emit(json tolerances, json result, const std::string& path) const {
    json report;
    report["command"] = args;
    report["tolerances"] = std::move(tolerances);
    report["result"] = std::move(result);
    if (timing) {
      report["timing_seconds"] =
          std::chrono::duration<double>(Clock::now() - start).count();
    }
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
      out << text;
    } else {
      write_file(path, text);
    }
  }

  void note_time() const {
    if (!timing) return;
    err << "elapsed "
        << std::chrono::duration<double>(Clock::now() - start).count()
        << " s\n";
  }
};

json quadrature_json(const QuadratureSpec& q) {
  return {{"nodes", q.nodes}, {"tol", q.tol}, {"max_level", q.max_level}};
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::string file;
  double horizon = kDefaultHorizon;
  double tol = kDefaultRankTolerance;
  double gramian_tol = kGramianTolerance;
  bool no_check = false;
  std::string out;
};

json property_json(bool rank, bool pbh, bool gramian, bool dims,
                   const Definiteness& d) {
  return {{"rank", rank},
          {"pbh", pbh},
          {"gramian", gramian},
          {"necessary_dims", dims},
          {"gramian_eigenvalues", definiteness_json(d)}};
}

void cmd_analyze(const Session& s, const AnalyzeArgs& a) {
  const SystemDefinition def = load_system(a.file);
  const StructuralTolerances tol{a.tol, a.gramian_tol};
  const QuadratureSpec quad;
  StructuralReport r;
  if (a.no_check) {
    const EvolutionOperators ops(def.system, {}, tol.rank);
    r = structural_tests(ops, a.horizon, quad, tol);
  } else {
    r = structural_report(def.system, a.horizon, quad, tol);
  }
  const bool agree =
      r.observable_rank == r.observable_pbh &&
      r.observable_rank == r.observable_gramian &&
      r.controllable_rank == r.controllable_pbh &&
      r.controllable_rank == r.controllable_gramian;
  json result = {
      {"n", r.n},
      {"mu", r.mu},
      {"alpha", r.alpha},
      {"k", def.system.k()},
      {"horizon", r.horizon},
      {"observability",
       property_json(r.observable_rank, r.observable_pbh,
                     r.observable_gramian, r.observability_dims,
                     r.observability_gramian)},
      {"controllability",
       property_json(r.controllable_rank, r.controllable_pbh,
                     r.controllable_gramian, r.controllability_dims,
                     r.controllability_gramian)},
      {"verdicts_agree", agree}};
  s.emit({{"rank", tol.rank},
          {"gramian", tol.gramian},
          {"quadrature", quadrature_json(quad)}},
         std::move(result), a.out);
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::string file;
  double t_end = 1.0;
  int steps = 100;
  std::string plan;
  std::string out;
};

std::vector<double> read_plan(const std::string& path);

void cmd_simulate(const Session& s, const SimulateArgs& a) {
  if (!(a.t_end > 0.0) || !std::isfinite(a.t_end)) {
    fail(ErrorCode::kInvalidArgument, "--t-end must be positive");
  }
  if (a.steps < 1) fail(ErrorCode::kInvalidArgument, "--steps must be >= 1");
  const SystemDefinition def = load_system(a.file);
  const CaputoSystem& sys = def.system;
  const EvolutionOperators ops(sys);

  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= sys.n(); ++i) csv << ",x_" << i;
  for (int i = 1; i <= sys.s(); ++i) csv << ",y_" << i;
  csv << "\n";
  const std::vector<double> grid =
      a.plan.empty() ? uniform_grid(a.t_end, a.steps) : read_plan(a.plan);
  for (double t : grid) {
    const Vector x = has_forcing(def)
                         ? solve_forced(ops, def.x0, *def.control, t)
                         : solve_homogeneous(ops, def.x0, t);
    const Vector y = output(sys, x);
    csv << format_double(t);
    for (Eigen::Index i = 0; i < x.size(); ++i) csv << ',' << format_double(x(i));
    for (Eigen::Index i = 0; i < y.size(); ++i) csv << ',' << format_double(y(i));
    csv << "\n";
  }
  if (a.out.empty()) {
    s.out << csv.str();
  } else {
    write_file(a.out, csv.str());
  }
  s.note_time();
}

// reconstruct ---------------------------------------------------------------

struct ReconstructArgs {
  std::string file;
  std::string samples;
  std::string plan;
  std::vector<int> reduced;
  double tol = kDefaultRankTolerance;
  bool normal_equations = false;
  std::string out;
};

struct Sample {
  double t;
  int component;  // 0-based
  double value;
};

int column_of(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

// Long format `t,component_index,value` (1-based components), or a
// trajectory as written by simulate, whose y columns are taken as samples.
// Trajectory rows at t = 0 are skipped; explicit samples there are errors.
std::vector<Sample> read_samples(const std::string& path, int s) {
  const CsvTable table = parse_csv(read_file(path), path);
  std::vector<Sample> samples;
  const auto& h = table.header;
  const bool trajectory = !h.empty() && column_of(h, "y_1") >= 0;
  if (trajectory) {
    const int tc = column_of(h, "t");
    if (tc < 0) fail(ErrorCode::kParseError, path + ": no t column");
    std::vector<int> cols;
    for (int i = 1; i <= s; ++i) {
      const int c = column_of(h, "y_" + std::to_string(i));
      if (c < 0) {
        fail(ErrorCode::kParseError,
             path + ": missing column y_" + std::to_string(i));
      }
      cols.push_back(c);
    }
    for (const auto& row : table.rows) {
      if (row[tc] == 0.0) continue;
      for (int i = 0; i < s; ++i) samples.push_back({row[tc], i, row[cols[i]]});
    }
  } else {
    int tc = 0, ic = 1, vc = 2;
    if (!h.empty()) {
      tc = column_of(h, "t");
      ic = column_of(h, "component_index");
      vc = column_of(h, "value");
      if (tc < 0 || ic < 0 || vc < 0) {
        fail(ErrorCode::kParseError,
             path + ": expected columns t,component_index,value");
      }
    } else if (!table.rows.empty() && table.rows[0].size() != 3) {
      fail(ErrorCode::kParseError,
           path + ": expected columns t,component_index,value");
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const std::string where = path + " row " + std::to_string(r + 1);
      const double index = row[ic];
      if (index != std::floor(index) || index < 1 || index > s) {
        fail(ErrorCode::kParseError,
             where + ": component_index must be in 1.." + std::to_string(s));
      }
      if (!(row[tc] > 0.0)) {
        fail(ErrorCode::kInvalidArgument,
             where + ": sample instants must be > 0");
      }
      samples.push_back({row[tc], static_cast<int>(index) - 1, row[vc]});
    }
  }
  if (samples.empty()) fail(ErrorCode::kParseError, path + ": no samples");
  return samples;
}

std::vector<double> read_plan(const std::string& path) {
  const CsvTable table = parse_csv(read_file(path), path);
  int tc = 1;
  if (!table.header.empty()) {
    tc = column_of(table.header, "t");
    if (tc < 0) fail(ErrorCode::kParseError, path + ": expected columns index,t");
  } else if (!table.rows.empty() && table.rows[0].size() < 2) {
    fail(ErrorCode::kParseError, path + ": expected columns index,t");
  }
  std::vector<double> instants;
  for (const auto& row : table.rows) instants.push_back(row[tc]);
  std::sort(instants.begin(), instants.end());
  if (instants.empty()) fail(ErrorCode::kParseError, path + ": empty plan");
  return instants;
}

bool same_instant(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

void cmd_reconstruct(const Session& s, const ReconstructArgs& a) {
  const SystemDefinition def = load_system(a.file);
  const CaputoSystem& sys = def.system;
  const EvolutionOperators ops(sys);
  std::vector<Sample> samples = read_samples(a.samples, sys.s());
  json warnings = json::array();
  const auto warn = [&](const std::string& message) {
    s.err << "warning: " << message << "\n";
    warnings.push_back(message);
  };

  if (!a.plan.empty()) {
    const std::vector<double> plan = read_plan(a.plan);
    std::vector<Sample> kept;
    for (double t : plan) {
      const auto before = kept.size();
      for (const Sample& x : samples) {
        if (same_instant(x.t, t)) kept.push_back({t, x.component, x.value});
      }
      if (kept.size() == before) {
        fail(ErrorCode::kParseError, a.samples + ": no samples at plan instant " +
                                         format_double(t));
      }
    }
    samples = std::move(kept);
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& x, const Sample& y) { return x.t < y.t; });

  std::vector<double> instants;
  std::map<std::pair<double, int>, int> seen;
  for (const Sample& x : samples) {
    if (instants.empty() || instants.back() != x.t) instants.push_back(x.t);
    if (seen[{x.t, x.component}]++ == 1) {
      warn("duplicated sample of component " +
           std::to_string(x.component + 1) + " at t = " + format_double(x.t));
    }
  }

  // Subtract the forced response so the samples are homogeneous outputs.
  std::vector<Vector> shift(instants.size(), Vector::Zero(sys.s()));
  if (has_forcing(def)) {
    for (std::size_t j = 0; j < instants.size(); ++j) {
      shift[j] = forced_sample_adjust(ops, *def.control, instants[j],
                                      Vector::Zero(sys.s()));
    }
  }
  const auto slot = [&](double t) {
    return static_cast<std::size_t>(
        std::lower_bound(instants.begin(), instants.end(), t) -
        instants.begin());
  };

  ReconstructionResult r;
  std::string mode;
  if (a.reduced.empty()) {
    mode = "full";
    const Matrix omega = build_observation_operator(ops, instants);
    Matrix rows(samples.size(), omega.cols());
    Vector y(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::size_t j = slot(samples[i].t);
      rows.row(i) = omega.row(j * sys.s() + samples[i].component);
      y(i) = samples[i].value + shift[j](samples[i].component);
    }
    r = reconstruct_x0(rows, y, {a.tol, a.normal_equations});
  } else {
    mode = "reduced";
    if (static_cast<int>(a.reduced.size()) != sys.s()) {
      fail(ErrorCode::kInvalidArgument,
           "--reduced needs one count per output component (" +
               std::to_string(sys.s()) + ")");
    }
    SamplingPlan plan;
    plan.per_component = a.reduced;
    const int pool = *std::max_element(a.reduced.begin(), a.reduced.end());
    if (pool > static_cast<int>(instants.size())) {
      fail(ErrorCode::kInvalidArgument,
           "--reduced asks for " + std::to_string(pool) +
               " instants but the samples have " +
               std::to_string(instants.size()));
    }
    plan.instants.assign(instants.begin(), instants.begin() + pool);
    plan.eta = plan.instants.front();
    std::vector<Vector> values(sys.s());
    for (int i = 0; i < sys.s(); ++i) {
      values[i].resize(a.reduced[i]);
      for (int j = 0; j < a.reduced[i]; ++j) {
        const auto it = std::find_if(samples.begin(), samples.end(),
                                     [&](const Sample& x) {
                                       return x.t == plan.instants[j] &&
                                              x.component == i;
                                     });
        if (it == samples.end()) {
          fail(ErrorCode::kParseError,
               a.samples + ": no sample of component " + std::to_string(i + 1) +
                   " at t = " + format_double(plan.instants[j]));
        }
        values[i](j) = it->value + shift[j](i);
      }
    }
    r = reduced_reconstruct(ops, plan, values, a.tol);
  }

  if (!(r.condition_number <= kConditionWarning)) {
    std::ostringstream os;
    os << "cond(Omega) = " << r.condition_number << " exceeds "
       << kConditionWarning << "; the estimate may be inaccurate";
    warn(os.str());
  }

  json result = {{"mode", mode},
                 {"x0", split_x0(r.x0_hat, sys.k())},
                 {"x0_stacked", to_json(r.x0_hat)},
                 {"residual", r.residual},
                 {"condition_number", r.condition_number},
                 {"rank", r.rank},
                 {"sample_count", r.sample_count},
                 {"instant_count", instants.size()},
                 {"forced_adjustment", has_forcing(def)},
                 {"warnings", warnings}};
  s.emit({{"rank", a.tol},
          {"condition_warning", kConditionWarning},
          {"normal_equations", a.normal_equations}},
         std::move(result), a.out);
}

// control -------------------------------------------------------------------

struct ControlArgs {
  std::string file;
  std::vector<double> target;
  double t = 1.0;
  int grid = 100;
  std::string out;
  std::string report;
};

void cmd_control(const Session& s, const ControlArgs& a) {
  const SystemDefinition def = load_system(a.file);
  const CaputoSystem& sys = def.system;
  if (static_cast<int>(a.target.size()) != sys.n()) {
    fail(ErrorCode::kDimensionMismatch,
         "--target needs " + std::to_string(sys.n()) + " entries");
  }
  if (!(a.t > 0.0) || !std::isfinite(a.t)) {
    fail(ErrorCode::kInvalidArgument, "--t must be positive");
  }
  if (a.grid < 1) fail(ErrorCode::kInvalidArgument, "--grid must be >= 1");
  const EvolutionOperators ops(sys);
  const Vector target = Eigen::Map<const Vector>(a.target.data(), sys.n());
  const ControlPlan plan =
      min_energy_control(ops, target, def.x0, a.t, uniform_grid(a.t, a.grid));

  if (!a.out.empty()) {
    std::ostringstream csv;
    csv << "t";
    for (int i = 1; i <= sys.m(); ++i) csv << ",u_" << i;
    csv << "\n";
    for (std::size_t j = 0; j < plan.grid.size(); ++j) {
      csv << format_double(plan.grid[j]);
      for (Eigen::Index i = 0; i < plan.values[j].size(); ++i) {
        csv << ',' << format_double(plan.values[j](i));
      }
      csv << "\n";
    }
    write_file(a.out, csv.str());
  }
  json result = {{"target", to_json(plan.target)},
                 {"horizon", plan.horizon},
                 {"gain", to_json(plan.gain)},
                 {"reached", to_json(plan.reached)},
                 {"terminal_error", plan.terminal_error},
                 {"gramian_eigenvalues", definiteness_json(plan.gramian)},
                 {"grid_points", plan.grid.size()},
                 {"csv", a.out.empty() ? json(nullptr) : json(a.out)}};
  if (def.control.has_value()) {
    s.err << "warning: the control in " << a.file
          << " is ignored; control computes its own input\n";
  }
  s.emit({{"gramian", kGramianTolerance},
          {"quadrature", quadrature_json(QuadratureSpec{})}},
         std::move(result), a.report);
}

// sample-plan ---------------------------------------------------------------

struct SamplePlanArgs {
  std::string file;
  int count = 0;
  double eta = 0.1;
  int trials = 1;
  std::uint64_t seed = 0;
  double window = kDefaultWindow;
  std::string out;
  std::string csv;
};

void cmd_sample_plan(const Session& s, SamplePlanArgs a) {
  if (const char* env = std::getenv("FRACSYS_SEED")) {
    try {
      std::size_t used = 0;
      a.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument,
           std::string("FRACSYS_SEED is not an unsigned integer: ") + env);
    }
  }
  const SystemDefinition def = load_system(a.file);
  const EvolutionOperators ops(def.system);
  const SearchResult found = conditioning_search(
      ops, a.trials, a.seed, a.eta, Basis::kMinimal, a.window, a.count);
  const SamplingPlan& plan = found.plan;

  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "index,t\n";
    for (int i = 0; i < plan.count(); ++i) {
      csv << i + 1 << ',' << format_double(plan.instants[i]) << "\n";
    }
    write_file(a.csv, csv.str());
  }
  const bool finite = std::isfinite(plan.omega);
  json result = {{"instants", plan.instants},
                 {"count", plan.count()},
                 {"eta", plan.eta},
                 {"omega", finite ? json(plan.omega) : json(nullptr)},
                 {"omega_infinite", !finite},
                 {"window", plan.width()},
                 {"condition_number", found.condition_number},
                 {"candidates", found.candidates},
                 {"seed", a.seed},
                 {"trials", a.trials}};
  s.emit({{"rank", kDefaultRankTolerance}}, std::move(result), a.out);
}

// coeffs --------------------------------------------------------------------

struct CoeffsArgs {
  std::string file;
  int p = -1;
  int horizon = -1;
  double tol = kDefaultRankTolerance;
  std::string out;
};

void cmd_coeffs(const Session& s, const CoeffsArgs& a) {
  const SystemDefinition def = load_system(a.file);
  const Matrix& mat = def.system.A();
  const int n = static_cast<int>(mat.rows());
  const int horizon = a.horizon >= 0 ? a.horizon : 2 * n;
  const MinimalExpansion e = minimal_expansion(mat, horizon, a.tol);
  const int p = a.p >= 0 ? a.p : horizon;
  json rows = json::array();
  for (int q = e.mu(); q <= p; ++q) {
    rows.push_back({{"p", q}, {"a", to_json(e.a(q))}});
  }
  json result = {{"n", n},
                 {"mu", e.mu()},
                 {"horizon", e.horizon()},
                 {"minimal", to_json(e.minimal().base())},
                 {"characteristic", to_json(e.a_char())},
                 {"table", rows},
                 {"singular_ratios", e.singular_ratios()},
                 {"fit_residual", e.fit_residual()}};
  s.emit({{"rank", a.tol}}, std::move(result), a.out);
}

std::string hint_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRankDeficient:
    case ErrorCode::kSingularCoefficientMatrix:
      return "re-run `fracsys sample-plan` (more trials or another seed) and "
             "sample at the instants it proposes";
    case ErrorCode::kAllCandidatesSingular:
      return "raise --trials, or check that the system is observable";
    case ErrorCode::kGramianSingular:
      return "check controllability with `fracsys analyze`";
    case ErrorCode::kTestDisagreement:
      return "the tests disagree numerically; `fracsys analyze --no-check` "
             "prints the raw verdicts";
    default:
      return "";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Linear fractional-order (Caputo) systems: structure, "
               "simulation, reconstruction and control.",
               "fracsys");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  Session session{args, out, err};

  const auto common = [&](CLI::App* sub, std::string& file) {
    sub->add_option("system", file, "System definition (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_flag("--timing", session.timing,
                  "Report wall time (breaks byte-identical output)");
  };

  AnalyzeArgs analyze;
  auto* sub_analyze = app.add_subcommand(
      "analyze", "Rank, PBH and Gramian tests for both properties");
  common(sub_analyze, analyze.file);
  sub_analyze->add_option("--horizon", analyze.horizon, "Gramian horizon t")
      ->capture_default_str();
  sub_analyze->add_option("--tol", analyze.tol, "Relative rank tolerance")
      ->capture_default_str();
  sub_analyze->add_option("--gramian-tol", analyze.gramian_tol,
                          "lambda_min / lambda_max threshold")
      ->capture_default_str();
  sub_analyze->add_flag("--no-check", analyze.no_check,
                        "Report disagreeing verdicts instead of failing");
  sub_analyze->add_option("--out", analyze.out, "Write the JSON report here");

  SimulateArgs simulate;
  auto* sub_simulate =
      app.add_subcommand("simulate", "Trajectory CSV t,x_1..x_n,y_1..y_s");
  common(sub_simulate, simulate.file);
  sub_simulate->add_option("--t-end", simulate.t_end, "Final time")
      ->capture_default_str();
  sub_simulate->add_option("--steps", simulate.steps, "Grid intervals")
      ->capture_default_str();
  sub_simulate
      ->add_option("--plan", simulate.plan,
                   "CSV index,t; evaluate at these instants instead")
      ->check(CLI::ExistingFile);
  sub_simulate->add_option("--out", simulate.out, "Write the CSV here");

  ReconstructArgs reconstruct;
  auto* sub_reconstruct = app.add_subcommand(
      "reconstruct", "Initial data from output samples");
  common(sub_reconstruct, reconstruct.file);
  sub_reconstruct
      ->add_option("--samples", reconstruct.samples,
                   "CSV t,component_index,value or a simulate trajectory")
      ->required()
      ->check(CLI::ExistingFile);
  sub_reconstruct
      ->add_option("--plan", reconstruct.plan,
                   "CSV index,t; only samples at these instants are used")
      ->check(CLI::ExistingFile);
  sub_reconstruct
      ->add_option("--reduced", reconstruct.reduced,
                   "Per-component instant counts n_1,...,n_s")
      ->delimiter(',');
  sub_reconstruct->add_option("--tol", reconstruct.tol, "Relative rank tolerance")
      ->capture_default_str();
  sub_reconstruct->add_flag("--normal-equations", reconstruct.normal_equations,
                            "Solve the normal equations instead of QR");
  sub_reconstruct->add_option("--out", reconstruct.out,
                              "Write the JSON report here");

  ControlArgs control;
  auto* sub_control =
      app.add_subcommand("control", "Minimum-energy steering to a target");
  common(sub_control, control.file);
  sub_control->add_option("--target", control.target, "Target state x*")
      ->required()
      ->delimiter(',');
  sub_control->add_option("--t", control.t, "Steering horizon")
      ->capture_default_str();
  sub_control->add_option("--grid", control.grid, "Grid intervals of the CSV")
      ->capture_default_str();
  sub_control->add_option("--out", control.out, "Write the CSV t,u_1..u_m here");
  sub_control->add_option("--report", control.report,
                          "Write the JSON certification here");

  SamplePlanArgs sample;
  auto* sub_sample = app.add_subcommand(
      "sample-plan", "Seeded sampling instants with the best cond(Omega)");
  common(sub_sample, sample.file);
  sub_sample->add_option("--count", sample.count, "Instants (0: mu k)")
      ->capture_default_str();
  sub_sample->add_option("--eta", sample.eta, "Window start (> 0)")
      ->capture_default_str();
  sub_sample->add_option("--trials", sample.trials, "Candidate plans")
      ->capture_default_str();
  sub_sample->add_option("--seed", sample.seed,
                         "Master seed (FRACSYS_SEED overrides)")
      ->capture_default_str();
  sub_sample->add_option("--window", sample.window,
                         "Window width when all eigenvalues are real")
      ->capture_default_str();
  sub_sample->add_option("--out", sample.out, "Write the JSON report here");
  sub_sample->add_option("--csv", sample.csv, "Write the plan CSV index,t here");

  CoeffsArgs coeffs;
  auto* sub_coeffs =
      app.add_subcommand("coeffs", "Minimal-polynomial coefficient tables");
  common(sub_coeffs, coeffs.file);
  sub_coeffs->add_option("--p", coeffs.p, "Last tabulated power (default: horizon)");
  sub_coeffs->add_option("--horizon", coeffs.horizon, "Table horizon (default 2n)");
  sub_coeffs->add_option("--tol", coeffs.tol, "Relative rank tolerance")
      ->capture_default_str();
  sub_coeffs->add_option("--out", coeffs.out, "Write the JSON report here");

  std::vector<const char*> argv{"fracsys"};
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sub_analyze) cmd_analyze(session, analyze);
    if (*sub_simulate) cmd_simulate(session, simulate);
    if (*sub_reconstruct) cmd_reconstruct(session, reconstruct);
    if (*sub_control) cmd_control(session, control);
    if (*sub_sample) cmd_sample_plan(session, sample);
    if (*sub_coeffs) cmd_coeffs(session, coeffs);
  } catch (const Error& e) {
    err << "fracsys: " << e.what() << "\n";
    const std::string hint = hint_for(e.code());
    if (!hint.empty()) err << "hint: " << hint << "\n";
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "fracsys: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fracsys
