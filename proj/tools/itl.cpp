#include <iostream>

#include "itl/cli.hpp"

int main(int argc, char** argv) { return itl::cli::run(argc, argv, std::cout, std::cerr); }
