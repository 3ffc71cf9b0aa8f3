#pragma once

#include <iosfwd>

namespace traindyn {

// Entry point of the traindyn command. Exit codes: 0 success, 1 runtime
// failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace traindyn
