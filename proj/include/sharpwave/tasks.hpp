#pragma once

#include <string>

namespace sharpwave {

// Runs one task (check | shoot | find-speed | phase | variational | simulate |
// sweep | regularity) against a scenario file, writing CSV/JSON/SVG results
// under out_dir. Returns the process exit code: 0 success, 1 solver error,
// 2 config error, 3 result-invariant violation.
int run_task(const std::string& task, const std::string& scenario_path,
             const std::string& out_dir, int parallel);

}  // namespace sharpwave
