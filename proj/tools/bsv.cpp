#include <iostream>

#include "bsv/cli.hpp"

int main(int argc, char** argv) { return bsv::run_cli(argc, argv, std::cout, std::cerr); }
