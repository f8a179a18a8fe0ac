#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace crr::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kDegenerate = 3,
  kInfeasible = 4,
  kPrecondition = 5,
};

/// Runs the `crr` command line. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path &path);

} // namespace crr::cli
