#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcap::cli {

/// Runs one command line (without the program name). Exit codes: 0 converged,
/// 2 iteration limit reached, 1 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcap::cli
