// cli.hpp
// Command-line front end. Exit codes: 0 ok, 1 usage error, 2 data or model error.

#pragma once

#include <iosfwd>

namespace jawtap::cli {

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace jawtap::cli
