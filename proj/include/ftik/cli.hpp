#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ftik::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kParseError = 2;
inline constexpr int kNonIntegral = 3;
inline constexpr int kUnknownFunctional = 4;

// Entry point of the `ftik` tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// FTIK_THREADS, with 0 or unset meaning one worker per hardware thread.
int threads_from_env();

}  // namespace ftik::cli
