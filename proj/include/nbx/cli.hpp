#pragma once

#include <iosfwd>

namespace nbx {

/// Full command-line entry point, factored out of main() so tests can drive
/// it in-process. Returns the process exit code: 0 success, 1 domain or I/O
/// error (reported as JSON), 2 usage error (message on `err`).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nbx
