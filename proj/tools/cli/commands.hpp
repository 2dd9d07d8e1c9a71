#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elkbc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;      // bad arguments, config or input files
inline constexpr int kExitResource = 2;  // a size cap or allocation limit was hit

/// Environment variable naming the default output directory of `toy-demo`.
inline constexpr const char* kCacheDirEnv = "ELKBC_CACHE_DIR";

/// Runs the `elkbc` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elkbc::cli
