#include <iostream>

#include "hilbertmark/cli.hpp"

int main(int argc, char** argv) { return hilbertmark::run_cli(argc, argv, std::cout, std::cerr); }
