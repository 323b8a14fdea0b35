#include "jetwave/cli.hpp"

int main(int argc, char** argv) { return jetwave::run_cli(argc, argv); }
