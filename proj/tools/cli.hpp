#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace penprec::cli {

/// Runs one command. `args` excludes the program name, so args[0] is the
/// command ("estimate", "simulate", "path" or "graph").
///
/// Returns the exit status: 0 on success, 1 on a usage, configuration or
/// input error, 2 on a numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default seed: PENPREC_SEED when set, otherwise 20090101.
/// Throws ConfigError if the variable is not an unsigned integer.
unsigned long long default_seed();

}  // namespace penprec::cli
