#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vmz {

// Arguments exclude the program name. Returns 0 on success, 1 when a verification
// fails and 2 on usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmz
