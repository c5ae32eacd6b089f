#pragma once

#include <iosfwd>

namespace aiknn::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kViolation = 2;

/// Runs one command line. Reports go to `out`; errors are a single
/// "error: ..." line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aiknn::cli
