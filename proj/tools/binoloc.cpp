#include <iostream>

#include "binoloc/cli.hpp"

int main(int argc, char** argv) { return binoloc::run_cli(argc, argv, std::cout, std::cerr); }
