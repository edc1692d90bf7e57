#pragma once

namespace manet::cli {

// Entry point behind tools/manetsim. Exit codes: 0 success, 1 usage or
// config parse error, 2 runtime error.
int run(int argc, const char* const* argv);

} // namespace manet::cli
