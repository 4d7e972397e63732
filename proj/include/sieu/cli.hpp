#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sieu {

/// Entry point of the `sieu` command. `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors and 2 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sieu
