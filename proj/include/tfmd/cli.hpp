#pragma once

#include <string>
#include <vector>

namespace tfmd {

/// Entry point behind the tfmd binary. args excludes the program name.
/// Exit codes: 0 success, 1 usage/validation, 2 I/O, 3 numerical
/// degeneracy.
int run_cli(const std::vector<std::string>& args);

}  // namespace tfmd
