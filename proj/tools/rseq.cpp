#include <iostream>

#include "rseq/cli.hpp"

int main(int argc, char** argv) { return rseq::cli::main(argc, argv, std::cout, std::cerr); }
