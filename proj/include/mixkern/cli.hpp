#pragma once

#include <string>
#include <vector>

namespace mixkern {

// Full command-line entry point (subcommands: augment, train, bench,
// eval-auroc, selfcheck). args excludes argv[0]. Exit codes: 0 success /
// converged, 2 not converged, 1 usage or IO error.
int run_cli(const std::vector<std::string>& args);

}  // namespace mixkern
