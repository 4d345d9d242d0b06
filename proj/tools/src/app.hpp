#pragma once

#include <iosfwd>

namespace vcz::cli {

/// Parses argv, dispatches the subcommand and returns the process exit code:
/// 0 success, 1 a property check failed, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vcz::cli
