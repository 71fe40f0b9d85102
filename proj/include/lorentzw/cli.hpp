#pragma once

namespace lorentzw {

// Command-line front end; returns the process exit code. Contract:
// 0 success, 1 verification failure, 2 config, 3 domain, 4 mask, 5 ODE.
int run_cli(int argc, const char* const* argv);

}  // namespace lorentzw
