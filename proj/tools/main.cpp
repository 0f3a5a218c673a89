#include <iostream>

#include "ssbc/cli.hpp"

int main(int argc, char** argv) { return ssbc::cli::run(argc, argv, std::cout, std::cerr); }
