#pragma once

namespace hsv {

// Entry point behind tools/main.cpp, callable in-process by tests.
// Exit codes: 0 success (including protocol rejections), 1 usage or
// config errors, 2 internal invariant violations.
int run_cli(int argc, const char* const* argv);

}  // namespace hsv
