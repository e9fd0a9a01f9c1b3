#include <iostream>

#include "upl/cli.hpp"

int main(int argc, char** argv) { return upl::cli::run(argc, argv, std::cout, std::cerr); }
