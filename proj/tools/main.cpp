#include <iostream>

#include "nbx/cli.hpp"

int main(int argc, char** argv) { return nbx::cli_main(argc, argv, std::cout, std::cerr); }
