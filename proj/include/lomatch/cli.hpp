#pragma once

#include <string>
#include <vector>

namespace lomatch::cli {

/// Runs one subcommand (ingest, pairs, features, match, recommend,
/// evaluate, synth). Returns the process exit status; errors are printed
/// to stderr with the failing subcommand named.
int run_command(const std::vector<std::string>& args);

}  // namespace lomatch::cli
