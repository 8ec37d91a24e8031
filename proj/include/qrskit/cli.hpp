#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qrskit::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;  // no beats, unreadable input, bad data
inline constexpr int kExitUsageError = 2;   // unknown flag, invalid flag value

// Subcommands: detect, analyze, synth, plot. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrskit::cli
