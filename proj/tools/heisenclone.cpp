#include <iostream>

#include "heisenclone/cli.hpp"

int main(int argc, char** argv) { return heisenclone::cli::run_cli(argc, argv, std::cout, std::cerr); }
