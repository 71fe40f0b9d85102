#include "lorentzw/cli.hpp"

int main(int argc, char** argv) { return lorentzw::run_cli(argc, argv); }
