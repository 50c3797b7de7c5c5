#ifndef STA_CLI_APP_HPP_
#define STA_CLI_APP_HPP_

#include <string>
#include <vector>

namespace sta::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 boundary-condition validation failure, 3 solver or
// fit failure, 1 other runtime errors; CLI11 codes for usage errors.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

// "1.29mm", "186ms", "7.16" (Hz), "302deg", "400nK" -> SI value.
enum class Unit { Length, Time, Frequency, Angle, Temperature, Dimensionless };
double parse_quantity(const std::string& text, Unit unit);

// "lo:hi:count" with units on lo/hi.
std::vector<double> parse_range(const std::string& text, Unit unit);

}  // namespace sta::cli

#endif
