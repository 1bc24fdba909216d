#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace seenet {

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns 0 on success, 2 on argument errors, 1 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace seenet
