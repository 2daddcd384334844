#include <iostream>

#include "sartex/cli.hpp"

int main(int argc, char** argv) { return sartex::cli::run(argc, argv, std::cout, std::cerr); }
