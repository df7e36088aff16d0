#include "tsurf/cli.hpp"

int main(int argc, char** argv) { return tsurf::cli::main(argc, argv); }
