#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trimedial::cli {

inline constexpr int kOk = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kUsage = 2;

// Runs one subcommand. `args` excludes the program name. Exit status: 0 when
// the identity holds, the proof is valid or the verification passes; 1 when
// a counterexample or witness is found or a proof is invalid; 2 on usage or
// input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace trimedial::cli
