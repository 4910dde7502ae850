#include <iostream>

#include "lifetime/cli.hpp"

int main(int argc, char** argv) { return lifetime::cli::run(argc, argv, std::cout, std::cerr); }
