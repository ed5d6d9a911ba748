#pragma once

namespace kac::cli {

// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 threshold violation
// under --assert.
int run(int argc, const char* const* argv);

} // namespace kac::cli
