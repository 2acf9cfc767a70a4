#include <iostream>

#include "ludemic/cli.hpp"

int main(int argc, char** argv) { return ludemic::cli::run(argc, argv, std::cout, std::cerr); }
