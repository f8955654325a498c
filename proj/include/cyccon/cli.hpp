#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cyccon::cli {

inline constexpr std::string_view kToolVersion = "cyccon 0.1.0";

enum ExitCode : int {
  kOk = 0,            // noncontextual, inconclusive, or plain success
  kInputError = 1,    // parse / validation failure, verify mismatch
  kPrecondition = 2,  // well-formed request the operation cannot serve
  kContextual = 3,
  kDisagreement = 4,  // oracle and criterion disagree (a bug)
};

/// Runs one command. `args` excludes the program name. The JSON report goes
/// to `out`, the human-readable decision line and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace cyccon::cli
