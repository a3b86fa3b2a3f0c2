#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qg::cli {

// Exit codes: 0 success or PASS, 1 a check failed, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qg::cli
