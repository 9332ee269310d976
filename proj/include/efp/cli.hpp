#pragma once

#include <string>
#include <vector>

namespace efp {

// Exit codes: 0 success, 2 verification failure, 3 parse/format error,
// 4 regime mismatch, 5 size-cap refusal.
int run_cli(std::vector<std::string> args);

}  // namespace efp
