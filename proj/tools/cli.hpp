#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ensemble_lens::cli {

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kInvalidArgs = 2,
  kIoFailure = 3,
  kDegenerate = 4,
  kValidationFailure = 5,
  kSelectionTooSmall = 6,
};

// Runs `ensemble-lens <subcommand> ...`; args excludes the program name.
// Subcommands: generate, analyze, sensitivity, serve.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ensemble_lens::cli
