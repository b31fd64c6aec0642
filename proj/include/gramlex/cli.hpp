#pragma once

#include <ostream>

namespace gramlex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Subcommands: extract, vocab, summarize, evaluate, report, validate.
/// Returns 0 on success, 1 on a usage error, 2 on a data error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gramlex::cli
