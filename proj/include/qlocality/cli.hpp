#pragma once

// Command-line front end. The executable is a thin wrapper around run_cli.
//
// Exit codes: 0 success / B does not signal to A, 1 signaling found (or a
// failed self-test), 2 input error, 3 structural failure.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSignaling = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitStructural = 3;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Indented key: value rendering of a report.
std::string render_text(const nlohmann::json& report);

}  // namespace qloc
