#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uqr::cli {

// Exit codes: 0 success, 1 validation mismatch, 2 usage/parse error, 3 capability mismatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uqr::cli
