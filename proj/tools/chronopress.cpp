#include <iostream>

#include "chronopress/cli.hpp"

int main(int argc, char** argv) { return chronopress::cli::run(argc, argv, std::cout, std::cerr); }
