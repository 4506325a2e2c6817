#include <iostream>

#include "mpdag/cli.hpp"

int main(int argc, char** argv) { return mpdag::cli::run(argc, argv, std::cout, std::cerr); }
