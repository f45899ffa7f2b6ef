#include <iostream>

#include "netdyn/cli.hpp"

int main(int argc, char** argv) { return netdyn::cli::main(argc, argv, std::cout, std::cerr); }
