#ifndef SHAPEPOSE_TOOLS_CLI_H_
#define SHAPEPOSE_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace shapepose {

// Runs the command line `args` (without the program name) and returns the
// process exit status: 0 on success, 2 on usage errors, 1 otherwise.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shapepose

#endif  // SHAPEPOSE_TOOLS_CLI_H_
