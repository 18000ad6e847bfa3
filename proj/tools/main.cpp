#include "pdq/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return pdq::cli::run(argc, argv, std::cout, std::cerr); }
