#include <iostream>

#include "sspec_cli/cli.hpp"

int main(int argc, char** argv) { return sspec::cli::run(argc, argv, std::cout, std::cerr); }
