#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracsys/cli.h"
#include "fracsys/errors.h"

namespace fracsys {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::kParseError, path + ": " + what);
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "not finite");
  return v;
}

Vector vector_field(const json& j, const std::string& path, int length) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  if (length >= 0 && static_cast<int>(j.size()) != length) {
    bad(path, "expected " + std::to_string(length) + " entries, got " +
                  std::to_string(j.size()));
  }
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(i) = number(j[i], index_path(path, i));
  }
  return v;
}

// rows < 0 or cols < 0 leave that extent free.
Matrix matrix_field(const json& j, const std::string& path, int rows, int cols,
                    const std::string& rows_from, const std::string& cols_from) {
  if (!j.is_array()) bad(path, "expected an array of rows");
  if (rows >= 0 && static_cast<int>(j.size()) != rows) {
    bad(path, "expected " + std::to_string(rows) + " rows (" + rows_from +
                  "), got " + std::to_string(j.size()));
  }
  if (j.empty()) bad(path, "no rows");
  int width = cols;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) bad(index_path(path, i), "expected a row array");
    if (width < 0) width = static_cast<int>(j[i].size());
  }
  Matrix m(j.size(), width);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row = index_path(path, i);
    if (static_cast<int>(j[i].size()) != width) {
      bad(row, "expected " + std::to_string(width) + " entries" +
                   (cols_from.empty() ? "" : " (" + cols_from + ")") +
                   ", got " + std::to_string(j[i].size()));
    }
    for (int c = 0; c < width; ++c) {
      m(i, c) = number(j[i][c], index_path(row, c));
    }
  }
  return m;
}

const json& require(const json& obj, const std::string& parent,
                    const char* key) {
  const auto it = obj.find(key);
  const std::string path = parent.empty() ? key : parent + "." + key;
  if (it == obj.end()) bad(path, "missing");
  return *it;
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      bad(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

ControlSignal parse_control(const json& j, int m, std::string& type) {
  const std::string path = "control";
  if (!j.is_object()) bad(path, "expected an object");
  const json& kind = require(j, path, "type");
  if (!kind.is_string()) bad(path + ".type", "expected a string");
  type = kind.get<std::string>();
  if (type == "zero") {
    reject_unknown(j, path, {"type"});
    return ControlSignal::zero(m);
  }
  if (type == "constant") {
    reject_unknown(j, path, {"type", "value"});
    return ControlSignal::constant(
        vector_field(require(j, path, "value"), path + ".value", m));
  }
  if (type == "step") {
    reject_unknown(j, path, {"type", "before", "after", "t0"});
    const Vector before =
        j.contains("before")
            ? vector_field(j["before"], path + ".before", m)
            : Vector::Zero(m);
    const Vector after =
        vector_field(require(j, path, "after"), path + ".after", m);
    const double t0 = number(require(j, path, "t0"), path + ".t0");
    if (!(t0 >= 0.0)) bad(path + ".t0", "must be >= 0");
    return ControlSignal::step(before, after, t0);
  }
  if (type == "sine") {
    reject_unknown(j, path, {"type", "amplitude", "omega", "phase"});
    const Vector amplitude =
        vector_field(require(j, path, "amplitude"), path + ".amplitude", m);
    const double omega = number(require(j, path, "omega"), path + ".omega");
    const double phase =
        j.contains("phase") ? number(j["phase"], path + ".phase") : 0.0;
    return ControlSignal::sine(amplitude, omega, phase);
  }
  if (type == "piecewise") {
    reject_unknown(j, path, {"type", "table"});
    const std::string tp = path + ".table";
    const json& table = require(j, path, "table");
    if (!table.is_array() || table.empty()) {
      bad(tp, "expected rows [t_break, u_1, ..., u_m]");
    }
    std::vector<double> times;
    std::vector<Vector> values;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const Vector row = vector_field(table[i], index_path(tp, i), m + 1);
      if (i == 0 && row(0) != 0.0) {
        bad(index_path(tp, 0), "first breakpoint must be 0");
      }
      if (i > 0 && !(row(0) > times.back())) {
        bad(index_path(tp, i), "breakpoints must increase");
      }
      times.push_back(row(0));
      values.push_back(row.tail(m));
    }
    return ControlSignal::piecewise_constant(times, values);
  }
  bad(path + ".type", "unknown control type '" + type +
                          "' (zero, constant, step, sine, piecewise)");
}

}  // namespace

SystemDefinition parse_system(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("(root)", "expected an object");
  reject_unknown(root, "", {"A", "B", "C", "alpha", "x0", "control"});

  const Matrix a = matrix_field(require(root, "", "A"), "A", -1, -1, "", "");
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) {
    bad("A", "must be square, got " + std::to_string(a.rows()) + "x" +
                 std::to_string(a.cols()));
  }
  const Matrix b =
      matrix_field(require(root, "", "B"), "B", n, -1, "rows of A", "");
  const Matrix c =
      matrix_field(require(root, "", "C"), "C", -1, n, "", "columns of A");
  const double alpha = number(require(root, "", "alpha"), "alpha");
  if (!(alpha > 0.0)) bad("alpha", "must be > 0");

  SystemDefinition def{CaputoSystem(a, b, c, alpha), {}, std::nullopt, ""};
  const int k = def.system.k();
  if (root.contains("x0")) {
    const json& x0 = root["x0"];
    if (!x0.is_array() || static_cast<int>(x0.size()) != k) {
      bad("x0", "expected " + std::to_string(k) +
                    " vectors (one per initial derivative)");
    }
    for (int j = 0; j < k; ++j) {
      def.x0.x0.push_back(vector_field(x0[j], index_path("x0", j), n));
    }
  } else {
    def.x0 = InitialData::zero(k, n);
  }
  if (root.contains("control")) {
    def.control = parse_control(root["control"], def.system.m(),
                                def.control_type);
  }
  return def;
}

SystemDefinition load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_system(text.str());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParseError) throw;
    fail(ErrorCode::kParseError,
         path + ": " + std::string(e.what()).substr(12));
  }
}

CsvTable parse_csv(std::string_view text, std::string_view name) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      cells.push_back(first == std::string::npos
                          ? ""
                          : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");

    std::vector<double> values;
    bool numeric = true;
    for (const auto& s : cells) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
        numeric = false;
        break;
      }
      values.push_back(v);
    }
    const std::string where =
        std::string(name) + " line " + std::to_string(line_no);
    if (!numeric) {
      if (table.header.empty() && table.rows.empty()) {
        table.header = cells;
        continue;
      }
      fail(ErrorCode::kParseError, where + ": non-numeric cell");
    }
    const std::size_t width =
        table.header.empty()
            ? (table.rows.empty() ? values.size() : table.rows[0].size())
            : table.header.size();
    if (values.size() != width) {
      fail(ErrorCode::kParseError, where + ": expected " +
                                       std::to_string(width) + " columns");
    }
    for (double v : values) {
      if (!std::isfinite(v)) fail(ErrorCode::kParseError, where + ": not finite");
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace fracsys
