#include "rspin/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rspin::cli::run(argc, argv, std::cout, std::cerr); }
