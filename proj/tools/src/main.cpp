#include <iostream>

#include "acx/cli.hpp"

int main(int argc, char** argv) { return acx::cli::run(argc, argv, std::cout, std::cerr); }
