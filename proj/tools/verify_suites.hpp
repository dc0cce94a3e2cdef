#pragma once

#include <string>

namespace wenc {

// Runs one named property suite ("geometry", "optical", "resolvent", "fit",
// "indicator") or "all", printing one PASS/FAIL line per check. Returns 0
// when every check passed, 1 otherwise. Unknown names return 2.
int run_verify_suite(const std::string& name);

} // namespace wenc
