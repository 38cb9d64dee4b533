#include "decaylab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return decaylab::cli::run_cli(argc, argv, std::cout, std::cerr); }
