#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace helmdd {

// Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.
int cli_main(int argc, char** argv);
// Same, with the arguments after the program name and explicit streams.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace helmdd
