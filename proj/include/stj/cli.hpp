#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stj::cli {

// exit codes: 0 ok, 2 validation error, 1 numerical failure
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace stj::cli
