#include "ahe/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ahe::cli::run(argc, argv, std::cout, std::cerr); }
