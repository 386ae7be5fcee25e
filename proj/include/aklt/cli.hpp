#pragma once

#include <ostream>

#include "aklt/errors.hpp"

namespace aklt::io {

/// 0 success, 1 unexpected failure, 2 usage, then one code per category.
int exit_code_for(ErrorCategory category) noexcept;

/// Subcommands sample, analyze, oracle-compare, povm-check, render. A
/// `--config FILE` (TOML, or JSON including a run manifest) supplies any
/// option not given on the command line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aklt::io
