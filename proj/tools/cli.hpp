#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commons::cli {

inline constexpr const char* kToolName = "commons-dyn";
inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;        // I/O, schema, invalid arguments
inline constexpr int kExitViolation = 2;    // assumption failure or non-finite run
inline constexpr int kExitNotCertified = 3;
inline constexpr int kExitInfeasible = 4;

/// Runs one command line (args excludes the program name) and returns the
/// process exit code. Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commons::cli
