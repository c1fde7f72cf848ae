#include <iostream>

#include "coblab/cli.hpp"

int main(int argc, char** argv) { return coblab::cli::main_entry(argc, argv, std::cout, std::cerr); }
