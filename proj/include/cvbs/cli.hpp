#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvbs {

// Exit codes of the command-line front end.
inline constexpr int kExitPass = 0;
inline constexpr int kExitNumericFailure = 1;
inline constexpr int kExitUsage = 2;

// Angle expression in radians: numbers, "pi" (or the Greek letter), implicit or
// explicit products and quotients, unary minus. "3pi/8", "-pi/4", "0.5*pi", "1.0472".
double parse_angle(const std::string& text);

// "lo..hi[:count]" (count defaults to default_count) or a comma list of angle expressions.
std::vector<double> parse_grid(const std::string& text, int default_count);

// args excludes the program name. Subcommands: state, verify, scan, report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvbs
