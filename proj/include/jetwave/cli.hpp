#pragma once

namespace jetwave {

enum ExitCode : int { exit_ok = 0, exit_runtime = 1, exit_config = 2, exit_verify = 3, exit_pinch = 4 };

/// Entry point of the jetwave command-line tool.
int run_cli(int argc, char** argv);

}  // namespace jetwave
