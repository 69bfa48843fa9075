#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bizmeta::cli {

// Exit codes: 0 success, 1 domain error (message on `err`), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bizmeta::cli
