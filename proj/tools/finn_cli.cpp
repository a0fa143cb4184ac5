#include "finn/cli/cli.hpp"

int main(int argc, char** argv) { return finn::cli::run_cli(argc, argv); }
