#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ndde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

// Runs one subcommand. args excludes the program name. Text meant for a
// terminal (help, usage, diagnostics) goes to err unless an output file is
// being written to stdout.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace ndde::cli
