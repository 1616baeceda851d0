#pragma once

namespace invlab::cli {

/// Quick invariant checks on small problems; prints one line per check and
/// returns the number of failures.
int run_selftest();

}  // namespace invlab::cli
