#include <iostream>

#include "egbm_cli/cli.hpp"

int main(int argc, char** argv) { return egbm::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
