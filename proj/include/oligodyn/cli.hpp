#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oligodyn::cli {

/**
 * Command-line front end.  Exit codes: 0 success, 2 invalid parameters or
 * usage, 3 solver convergence failure, 4 bracketing failure, 5 file error.
 * Errors print to `err` with an "error: " prefix.
 *
 * The stream overload exists so tests can drive the full CLI in-process.
 */
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, char** argv);

}  // namespace oligodyn::cli
