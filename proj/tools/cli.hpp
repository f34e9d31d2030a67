#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "archivesafe/error.hpp"

namespace archivesafe::cli {

// Process exit statuses. These are part of the tool's interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitNoSolution = 4;
inline constexpr int kExitCorrupt = 5;
inline constexpr int kExitCannotReduce = 6;

int exit_code_for(ErrorCode code) noexcept;

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace archivesafe::cli
