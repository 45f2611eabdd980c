#pragma once

#include <ostream>

namespace lde::cli {

// Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lde::cli
