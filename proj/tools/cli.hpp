#pragma once

namespace impactis::cli {

// Parses argv and runs one subcommand (ingest, compute, report, synth).
// Exit codes: 0 success, 1 internal error, 2 user/input error.
int run(int argc, const char* const* argv);

}  // namespace impactis::cli
