#include <iostream>

#include "credo/cli.hpp"

int main(int argc, char** argv) { return credo::cli::main(argc, argv, std::cout, std::cerr); }
