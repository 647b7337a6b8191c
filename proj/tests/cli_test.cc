#include "fracsys/cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fracsys/errors.h"
#include "fracsys/fractional.h"

namespace fracsys {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int status = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.status = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("fracsys_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

constexpr const char* kDemo = R"({
  "A": [[0, 1], [-2, -0.5]], "B": [[0], [1]], "C": [[1, 0]], "alpha": 0.7,
  "x0": [[1, -0.5]]
})";

constexpr const char* kOscillator = R"({
  "A": [[0, 1], [-1, 0]], "B": [[0], [1]], "C": [[1, 0]], "alpha": 1.5,
  "x0": [[1, 0], [0, 1]],
  "control": {"type": "step", "after": [1], "t0": 0.3}
})";

TEST_F(CliTest, AnalyzeDemoSystemAllTrue) {
  const Result r = call({"analyze", file("demo.json", kDemo)});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  for (const char* prop : {"observability", "controllability"}) {
    for (const char* test : {"rank", "pbh", "gramian", "necessary_dims"}) {
      EXPECT_TRUE(res[prop][test].get<bool>()) << prop << " " << test;
    }
  }
  EXPECT_EQ(res["mu"], 2);
  EXPECT_TRUE(res["verdicts_agree"].get<bool>());
}

TEST_F(CliTest, AnalyzeIdentityWithOneOutputIsUnobservable) {
  const Result r = call({"analyze", file("eye.json", R"({
    "A": [[1, 0], [0, 1]], "B": [[1, 0], [0, 1]], "C": [[1, 0]], "alpha": 1})")});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  EXPECT_FALSE(res["observability"]["rank"].get<bool>());
  EXPECT_FALSE(res["observability"]["pbh"].get<bool>());
  EXPECT_FALSE(res["observability"]["gramian"].get<bool>());
  EXPECT_TRUE(res["controllability"]["rank"].get<bool>());
}

TEST_F(CliTest, AnalyzeTolerancesAreEchoed) {
  const Result r = call({"analyze", file("demo.json", kDemo), "--tol", "1e-7",
                         "--gramian-tol", "1e-6", "--horizon", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json rep = r.report();
  EXPECT_EQ(rep["tolerances"]["rank"].get<double>(), 1e-7);
  EXPECT_EQ(rep["tolerances"]["gramian"].get<double>(), 1e-6);
  EXPECT_EQ(rep["result"]["horizon"].get<double>(), 2.0);
  EXPECT_FALSE(rep.contains("timing_seconds"));
}

TEST_F(CliTest, MalformedMatrixNamesTheField) {
  const Result r = call({"analyze", file("bad.json", R"({
    "A": [[0, 1], [-1, 0]], "B": [[0], [1], [2]], "C": [[1, 0]], "alpha": 1})")});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("B:"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, ParseDiagnostics) {
  const auto message = [](const char* text) {
    try {
      parse_system(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"A": [[1, 2]], "B": [[1]], "C": [[1]], "alpha": 1})")
                .find("A: must be square"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1, 2]], "alpha": 1})")
                .find("C[0]: expected 1 entries"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [["x"]], "C": [[1]], "alpha": 1})")
                .find("B[0][0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]]})").find("alpha"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 0})")
                .find("alpha: must be > 0"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 1.5,
                        "x0": [[1]]})")
                .find("x0: expected 2 vectors"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 1,
                        "gain": 2})")
                .find("gain: unknown field"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 1,
                        "control": {"type": "ramp"}})")
                .find("control.type"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 1,
                        "control": {"type": "piecewise",
                                    "table": [[0.5, 1]]}})")
                .find("control.table[0]: first breakpoint"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]], "alpha": 1,
                        "control": {"type": "step", "after": [1, 2],
                                    "t0": 1}})")
                .find("control.after"),
            std::string::npos);
  EXPECT_NE(message("{").find("invalid JSON"), std::string::npos);
}

TEST_F(CliTest, ControlKinds) {
  const SystemDefinition def = parse_system(R"({
    "A": [[0]], "B": [[1, 1]], "C": [[1]], "alpha": 1,
    "control": {"type": "piecewise", "table": [[0, 1, 2], [0.5, -1, 0]]}})");
  ASSERT_TRUE(def.control.has_value());
  EXPECT_EQ((*def.control)(0.25), Eigen::Vector2d(1, 2));
  EXPECT_EQ((*def.control)(0.5), Eigen::Vector2d(-1, 0));
  EXPECT_EQ(def.control->breakpoints(), std::vector<double>{0.5});

  const SystemDefinition sine = parse_system(R"({
    "A": [[0]], "B": [[1]], "C": [[1]], "alpha": 1,
    "control": {"type": "sine", "amplitude": [2], "omega": 3}})");
  EXPECT_NEAR((*sine.control)(0.1)(0), 2 * std::sin(0.3), 1e-15);
  EXPECT_EQ(sine.x0.x0.size(), 1u);
  EXPECT_EQ(sine.x0.x0[0], Vector::Zero(1));
}

TEST_F(CliTest, SimulateIntegratorIsConstant) {
  const Result r = call({"simulate",
                         file("int.json", R"({"A": [[0]], "B": [[1]],
                           "C": [[2]], "alpha": 1, "x0": [[1]]})"),
                         "--t-end", "3", "--steps", "6"});
  ASSERT_EQ(r.status, 0) << r.err;
  const CsvTable t = parse_csv(r.out, "out");
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "x_1", "y_1"}));
  ASSERT_EQ(t.rows.size(), 7u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i][0], 3.0 * i / 6);
    EXPECT_EQ(t.rows[i][1], 1.0);
    EXPECT_EQ(t.rows[i][2], 2.0);
  }
}

TEST_F(CliTest, SimulateSecondOrderOscillator) {
  const std::string cos_file = file("cos.json", R"({"A": [[-1]], "B": [[0]],
      "C": [[1]], "alpha": 2, "x0": [[1], [0]]})");
  const std::string sin_file = file("sin.json", R"({"A": [[-1]], "B": [[0]],
      "C": [[1]], "alpha": 2, "x0": [[0], [1]]})");
  const std::string t_end = format_double(2 * std::numbers::pi);
  const Result c = call({"simulate", cos_file, "--t-end", t_end, "--steps", "64"});
  const Result s = call({"simulate", sin_file, "--t-end", t_end, "--steps", "64"});
  ASSERT_EQ(c.status, 0) << c.err;
  ASSERT_EQ(s.status, 0) << s.err;
  const CsvTable ct = parse_csv(c.out, "cos");
  const CsvTable st = parse_csv(s.out, "sin");
  for (std::size_t i = 0; i < ct.rows.size(); ++i) {
    const double t = ct.rows[i][0];
    EXPECT_NEAR(ct.rows[i][1], std::cos(t), 1e-6) << t;
    EXPECT_NEAR(st.rows[i][1], std::sin(t), 1e-6) << t;
  }
}

TEST_F(CliTest, SimulateStepMatchesSolveForced) {
  const std::string sys = file("osc.json", kOscillator);
  const Result r = call({"simulate", sys, "--t-end", "1", "--steps", "5",
                         "--out", path("traj.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const CsvTable t = parse_csv(slurp(path("traj.csv")), "traj");
  const SystemDefinition def = parse_system(kOscillator);
  const EvolutionOperators ops(def.system);
  for (const auto& row : t.rows) {
    const Vector x = solve_forced(ops, def.x0, *def.control, row[0]);
    EXPECT_EQ(row[1], x(0));
    EXPECT_EQ(row[2], x(1));
    EXPECT_EQ(row[3], x(0));
  }
}

TEST_F(CliTest, SimulateRejectsBadGrid) {
  const std::string sys = file("osc.json", kOscillator);
  EXPECT_EQ(call({"simulate", sys, "--t-end", "0"}).status, 2);
  EXPECT_EQ(call({"simulate", sys, "--steps", "0"}).status, 2);
  EXPECT_EQ(call({"simulate", sys, "--steps", "x"}).status, 2);
}

TEST_F(CliTest, TrajectoryRoundTripRecoversInitialData) {
  const std::string sys = file("osc.json", kOscillator);
  ASSERT_EQ(call({"simulate", sys, "--t-end", "1", "--steps", "20", "--out",
                  path("traj.csv")})
                .status,
            0);
  const Result r = call({"reconstruct", sys, "--samples", path("traj.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  const Eigen::Vector4d expected(1, 0, 0, 1);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(res["x0_stacked"][i].get<double>(), expected(i), 1e-5);
  }
  EXPECT_EQ(res["sample_count"], 20);  // t = 0 row skipped
  EXPECT_TRUE(res["forced_adjustment"].get<bool>());
}

TEST_F(CliTest, PlanRoundTripRecoversInitialData) {
  const std::string sys = file("osc.json", kOscillator);
  ASSERT_EQ(call({"sample-plan", sys, "--trials", "10", "--seed", "3", "--csv",
                  path("plan.csv")})
                .status,
            0);
  ASSERT_EQ(call({"simulate", sys, "--plan", path("plan.csv"), "--out",
                  path("traj.csv")})
                .status,
            0);
  const Result r = call({"reconstruct", sys, "--samples", path("traj.csv"),
                         "--plan", path("plan.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  EXPECT_EQ(res["sample_count"], 4);
  EXPECT_LE(res["condition_number"].get<double>(), 1e6);
  const Eigen::Vector4d expected(1, 0, 0, 1);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(res["x0_stacked"][i].get<double>(), expected(i), 1e-5);
  }
}

TEST_F(CliTest, LongFormatSamples) {
  const std::string sys = file("demo.json", kDemo);
  const SystemDefinition def = parse_system(kDemo);
  const EvolutionOperators ops(def.system);
  std::ostringstream csv;
  csv << "t,component_index,value\n";
  for (double t : {0.3, 0.9, 1.4}) {
    csv << format_double(t) << ",1,"
        << format_double(output(def.system, solve_homogeneous(ops, def.x0, t))(0))
        << "\n";
  }
  const Result r =
      call({"reconstruct", sys, "--samples", file("s.csv", csv.str())});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  EXPECT_NEAR(res["x0"][0][0].get<double>(), 1.0, 1e-8);
  EXPECT_NEAR(res["x0"][0][1].get<double>(), -0.5, 1e-8);

  const Result zero = call({"reconstruct", sys, "--samples",
                            file("z.csv", "t,component_index,value\n0,1,1\n")});
  EXPECT_EQ(zero.status, 2);
  const Result index = call({"reconstruct", sys, "--samples",
                             file("i.csv", "t,component_index,value\n1,2,1\n")});
  EXPECT_EQ(index.status, 2);
  EXPECT_NE(index.err.find("component_index"), std::string::npos);
}

TEST_F(CliTest, DuplicatedInstantsAreRankDeficient) {
  const std::string sys = file("demo.json", kDemo);
  const Result r = call({"reconstruct", sys, "--samples",
                         file("d.csv", "t,component_index,value\n"
                                       "0.5,1,0.2\n0.5,1,0.2\n0.5,1,0.2\n")});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("RankDeficient"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("sample-plan"), std::string::npos);
  EXPECT_NE(r.err.find("duplicated sample"), std::string::npos);
}

TEST_F(CliTest, ReducedModeMatchesFullMode) {
  const std::string sys = file("osc.json", kOscillator);
  ASSERT_EQ(call({"sample-plan", sys, "--seed", "5", "--trials", "5", "--csv",
                  path("plan.csv")})
                .status,
            0);
  ASSERT_EQ(call({"simulate", sys, "--plan", path("plan.csv"), "--out",
                  path("traj.csv")})
                .status,
            0);
  const Result full = call({"reconstruct", sys, "--samples", path("traj.csv")});
  const Result reduced = call(
      {"reconstruct", sys, "--samples", path("traj.csv"), "--reduced", "4"});
  ASSERT_EQ(full.status, 0) << full.err;
  ASSERT_EQ(reduced.status, 0) << reduced.err;
  EXPECT_EQ(reduced.report()["result"]["mode"], "reduced");
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(full.report()["result"]["x0_stacked"][i].get<double>(),
                reduced.report()["result"]["x0_stacked"][i].get<double>(),
                1e-10);
  }
  EXPECT_EQ(call({"reconstruct", sys, "--samples", path("traj.csv"),
                  "--reduced", "9"})
                .status,
            2);
  EXPECT_EQ(call({"reconstruct", sys, "--samples", path("traj.csv"),
                  "--reduced", "2,2"})
                .status,
            2);
}

TEST_F(CliTest, ControlIntegratorIsUnitInput) {
  const std::string sys = file("int.json", R"({"A": [[0]], "B": [[1]],
      "C": [[1]], "alpha": 1})");
  const Result r = call({"control", sys, "--target", "1", "--t", "1", "--grid",
                         "8", "--out", path("u.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const CsvTable u = parse_csv(slurp(path("u.csv")), "u");
  EXPECT_EQ(u.header, (std::vector<std::string>{"t", "u_1"}));
  ASSERT_EQ(u.rows.size(), 9u);
  for (const auto& row : u.rows) EXPECT_NEAR(row[1], 1.0, 1e-12);
  EXPECT_LE(r.report()["result"]["terminal_error"].get<double>(), 1e-12);
}

TEST_F(CliTest, ControlScalarClosedForm) {
  // alpha = 1, x' = a x + u: W = (e^{2aT} - 1) / (2a),
  // u(tau) = e^{a(T - tau)} (x* - e^{aT} x0) / W.
  const double a = -0.7, horizon = 1.5, target = 2.0, x0 = 0.5;
  const std::string sys = file("s.json", R"({"A": [[-0.7]], "B": [[1]],
      "C": [[1]], "alpha": 1, "x0": [[0.5]]})");
  const Result r = call({"control", sys, "--target", "2", "--t", "1.5",
                         "--grid", "10", "--out", path("u.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const double w = (std::exp(2 * a * horizon) - 1) / (2 * a);
  const double gain = (target - std::exp(a * horizon) * x0) / w;
  EXPECT_NEAR(r.report()["result"]["gain"][0].get<double>(), gain, 1e-8);
  for (const auto& row : parse_csv(slurp(path("u.csv")), "u").rows) {
    EXPECT_NEAR(row[1], std::exp(a * (horizon - row[0])) * gain, 1e-8);
  }
}

TEST_F(CliTest, UncontrollableLeavesNoCsv) {
  const std::string sys = file("unc.json", R"({"A": [[1, 0], [0, 2]],
      "B": [[1], [0]], "C": [[1, 1]], "alpha": 1})");
  const Result r =
      call({"control", sys, "--target", "1,1", "--out", path("u.csv")});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("GramianSingular"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("u.csv")));
  EXPECT_EQ(call({"control", sys, "--target", "1"}).status, 2);
}

TEST_F(CliTest, SamplePlanWindowAndDeterminism) {
  const std::string sys = file("osc.json", R"({"A": [[0, 2], [-2, 0]],
      "B": [[0], [1]], "C": [[1, 0]], "alpha": 1})");
  const std::vector<std::string> args{"sample-plan", sys, "--trials", "7",
                                      "--seed", "11"};
  const Result a = call(args);
  const Result b = call(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json res = a.report()["result"];
  EXPECT_EQ(res["omega"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(res["window"].get<double>(), std::numbers::pi / 2);
  for (const auto& t : res["instants"]) {
    EXPECT_GE(t.get<double>(), 0.1);
    EXPECT_LT(t.get<double>(), 0.1 + std::numbers::pi / 2);
  }
  EXPECT_EQ(res["count"], 2);
  EXPECT_EQ(res["candidates"].size(), 7u);
}

TEST_F(CliTest, MoreTrialsNeverWorse) {
  const std::string sys = file("osc.json", kOscillator);
  const Result one = call({"sample-plan", sys, "--trials", "1", "--seed", "4"});
  const Result many = call({"sample-plan", sys, "--trials", "50", "--seed", "4"});
  ASSERT_EQ(one.status, 0);
  ASSERT_EQ(many.status, 0);
  EXPECT_LE(many.report()["result"]["condition_number"].get<double>(),
            one.report()["result"]["condition_number"].get<double>());
}

TEST_F(CliTest, SeedEnvironmentOverridesFlag) {
  const std::string sys = file("osc.json", kOscillator);
  const Result flag = call({"sample-plan", sys, "--seed", "21"});
  ::setenv("FRACSYS_SEED", "21", 1);
  const Result env = call({"sample-plan", sys, "--seed", "99"});
  ::setenv("FRACSYS_SEED", "nope", 1);
  const Result bad = call({"sample-plan", sys});
  ::unsetenv("FRACSYS_SEED");
  ASSERT_EQ(env.status, 0);
  EXPECT_EQ(flag.report()["result"], env.report()["result"]);
  EXPECT_EQ(bad.status, 2);
}

TEST_F(CliTest, SamplePlanCountAndRealSpectrum) {
  const std::string sys = file("diag.json", R"({"A": [[-1, 0], [0, -2]],
      "B": [[1], [1]], "C": [[1, 1]], "alpha": 0.5})");
  const Result r = call({"sample-plan", sys, "--count", "5", "--window", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  EXPECT_TRUE(res["omega"].is_null());
  EXPECT_TRUE(res["omega_infinite"].get<bool>());
  EXPECT_EQ(res["window"].get<double>(), 2.0);
  EXPECT_EQ(res["instants"].size(), 5u);
  EXPECT_EQ(call({"sample-plan", sys, "--eta", "0"}).status, 2);
}

TEST_F(CliTest, SamplePlanUnobservableIsSurfaced) {
  const std::string sys = file("eye.json", R"({"A": [[1, 0], [0, 1]],
      "B": [[1], [0]], "C": [[1, 0]], "alpha": 1})");
  const Result r = call({"sample-plan", sys, "--count", "3", "--trials", "3"});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("AllCandidatesSingular"), std::string::npos);
}

TEST_F(CliTest, CoeffsTables) {
  const Result r = call({"coeffs", file("d.json", R"({
      "A": [[1, 0, 0], [0, 2, 0], [0, 0, 1]], "B": [[1], [1], [1]],
      "C": [[1, 1, 1]], "alpha": 1})")});
  ASSERT_EQ(r.status, 0) << r.err;
  const json res = r.report()["result"];
  EXPECT_EQ(res["mu"], 2);
  EXPECT_NEAR(res["table"][0]["a"][0].get<double>(), -2, 1e-12);
  EXPECT_NEAR(res["table"][0]["a"][1].get<double>(), 3, 1e-12);
  EXPECT_EQ(res["table"].size(), 5u);  // p = 2..6

  const Result nil = call({"coeffs", file("n.json", R"({
      "A": [[0, 1], [0, 0]], "B": [[1], [1]], "C": [[1, 1]], "alpha": 1})")});
  ASSERT_EQ(nil.status, 0) << nil.err;
  for (const auto& row : nil.report()["result"]["table"]) {
    for (const auto& v : row["a"]) EXPECT_EQ(v.get<double>(), 0.0);
  }
}

TEST_F(CliTest, CoeffsBeyondHorizon) {
  const std::string sys = file("d.json", R"({"A": [[1, 0], [0, 2]],
      "B": [[1], [1]], "C": [[1, 1]], "alpha": 1})");
  const Result r = call({"coeffs", sys, "--p", "5"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("HorizonExceeded"), std::string::npos);
  EXPECT_EQ(call({"coeffs", sys, "--p", "5", "--horizon", "5"}).status, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({}).status, 2);
  EXPECT_EQ(call({"frobnicate"}).status, 2);
  EXPECT_EQ(call({"analyze", path("missing.json")}).status, 2);
  EXPECT_EQ(call({"--help"}).status, 0);
}

TEST_F(CliTest, ReportsGoToOut) {
  const std::string sys = file("demo.json", kDemo);
  const Result r = call({"coeffs", sys, "--out", path("c.json")});
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(path("c.json")))["result"]["mu"], 2);
}

TEST_F(CliTest, TimingIsOptIn) {
  const std::string sys = file("demo.json", kDemo);
  const Result r = call({"coeffs", sys, "--timing"});
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.report().contains("timing_seconds"));
}

TEST(Csv, HeaderAndRows) {
  const CsvTable t = parse_csv("a, b\r\n1,2\n\n3, 4e-1\n", "x");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], 0.4);
  EXPECT_THROW(parse_csv("a,b\n1\n", "x"), Error);
  EXPECT_THROW(parse_csv("1,2\nq,3\n", "x"), Error);
  EXPECT_EQ(parse_csv("1,2\n", "x").header.size(), 0u);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace fracsys
