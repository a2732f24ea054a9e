#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace folnerlab {

/// Exit codes: 0 computed / verdict-true, 1 usage error, 2 verdict-false,
/// 3 indeterminate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace folnerlab
