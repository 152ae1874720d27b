#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glossfill::cli {

/// Exit codes of `run`.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

/// Run one `glossfill` subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace glossfill::cli
