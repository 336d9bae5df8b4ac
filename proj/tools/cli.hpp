#pragma once

/// Command-line dispatch, linked separately from the thin main() so tests can
/// drive subcommands in-process.
/// Exit codes: 0 success, 1 analysis failed or was inconclusive where the
/// subcommand demands a positive result, 2 usage error, 3 data error.
int cmd_dispatch(int argc, const char* const* argv);
