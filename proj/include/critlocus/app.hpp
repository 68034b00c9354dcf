#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace critlocus::app {

/// CLI entry point. Exit codes: 0 success, 1 domain/computation errors
/// (message names the error case), 2 usage errors.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// The built-in invariant suite behind `critlocus selftest`.
int selftest(std::ostream& out);

}  // namespace critlocus::app
