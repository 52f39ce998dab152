#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hilbert::cli {

// args excludes the program name. Exit codes: 0 success, 2 invalid input, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hilbert::cli
