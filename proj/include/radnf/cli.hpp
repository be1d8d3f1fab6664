#ifndef RADNF_CLI_HPP
#define RADNF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace radnf
{

// Exit codes: 0 success, 1 usage or unreadable input, 2 precondition violation,
// 3 numerical non-convergence, 4 internal assertion failure.
int run_command(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err);

} // namespace radnf

#endif
