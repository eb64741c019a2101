// SPDX-License-Identifier: Apache-2.0
#pragma once

// The stagg command line, callable in-process so tests can drive it.
// Returns the process exit code: 0 ok, 1 runtime or I/O failure, 2 usage or
// format error.
int run_cli(int argc, const char* const* argv);
