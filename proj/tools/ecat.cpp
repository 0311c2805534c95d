#include <iostream>

#include "ecat/cli.hpp"

int main(int argc, char** argv) { return ecat::cli::run(argc, argv, std::cout, std::cerr); }
