#include <iostream>

#include "he3sq/cli.hpp"

int main(int argc, char** argv) { return he3sq::cli::main(argc, argv, std::cout, std::cerr); }
