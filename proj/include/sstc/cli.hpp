#pragma once

#include <iosfwd>

namespace sstc {

/// Entry point of the `sstcm` tool (subcommands mine, synth, experiment).
/// Exit codes: 0 success, 1 I/O or parse error, 2 configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sstc
