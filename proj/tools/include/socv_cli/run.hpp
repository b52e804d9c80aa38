#pragma once

#include <iosfwd>

namespace socv::cli {

/// Parses argv ("socv check --problem ..."), runs the requested stage and
/// writes the report. Returns 0, 1 (violated), 2 (blocked/infeasible) or
/// 3 (usage or configuration error). Does not throw.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace socv::cli
