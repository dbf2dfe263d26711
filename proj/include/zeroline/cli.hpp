#pragma once

#include <iosfwd>

namespace zeroline::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { Ok = 0, Usage = 1, Unknown = 2, NotSupported = 3, Internal = 4 };

/// Parses argv, runs one command and writes the report to `out`; diagnostics
/// go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace zeroline::cli
