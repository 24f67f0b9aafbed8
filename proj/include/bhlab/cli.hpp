#ifndef BHLAB_CLI_HPP
#define BHLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bhlab
{

// Exit codes: 0 success / all checks pass, 1 check failures, 2 usage errors.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

// Runs the command line (without the program name).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace bhlab

#endif
