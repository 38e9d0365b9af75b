#pragma once

namespace qchab::cli {

// Full command-line entry point.  Returns the process exit code:
//   0  success
//   1  usage or input-schema error
//   2  violated internal invariant
int run(int argc, const char* const* argv);

}  // namespace qchab::cli
