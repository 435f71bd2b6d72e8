#pragma once

#include <iosfwd>

namespace stacharge::cli {

/// Runs one subcommand: simulate, sweep-tau, sweep-gamma, emit-pulses, check-cd, check-frame.
/// Returns 0 on success, 1 on validation/usage failure, 2 on numerical failure.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stacharge::cli
