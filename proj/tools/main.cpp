#include <iostream>

#include "zeroline/cli.hpp"

int main(int argc, char** argv) { return zeroline::cli::run(argc, argv, std::cout, std::cerr); }
