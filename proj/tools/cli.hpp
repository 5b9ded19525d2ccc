#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bandedge::cli {

/// Run one CLI invocation. Returns 0 on success, 1 when a requested check
/// failed (or a certificate expectation was not met), 2 on input errors.
/// Reports go to `out` unless an --out file is given; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bandedge::cli
