#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracsys/fractional.h"

namespace fracsys {

/// Contents of a system-definition file:
///   {"A": [[..]], "B": [[..]], "C": [[..]], "alpha": 0.5,
///    "x0": [[..], ..],            k vectors of length n (default zero)
///    "control": {"type": "zero" | "constant" | "step" | "sine" |
///                        "piecewise", ...}}
struct SystemDefinition {
  CaputoSystem system;
  InitialData x0;
  std::optional<ControlSignal> control;
  /// The control as written, for echoing; null when absent.
  std::string control_type;
};

/// Parses the JSON text of a system definition. Throws kParseError with the
/// path of the offending field ("B", "B[1]", "control.after", ...).
SystemDefinition parse_system(std::string_view text);
SystemDefinition load_system(const std::string& path);

/// Rows of a comma-separated file. A first line that does not parse as
/// numbers is returned as the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(std::string_view text, std::string_view name);

/// %.17g.
std::string format_double(double v);

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`; the return value is the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fracsys
