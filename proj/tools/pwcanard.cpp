#include <iostream>

#include "pwcanard/cli.hpp"

int main(int argc, char** argv) { return pwc::cli::run(argc, argv, std::cout, std::cerr); }
