#pragma once

#include <iosfwd>

namespace qpwalk::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerdictFailure = 1;
inline constexpr int kInputError = 2;

// Parses argv (argv[0] is the program name) and runs one verb. Data goes to
// `out` or the --output file, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpwalk::cli
