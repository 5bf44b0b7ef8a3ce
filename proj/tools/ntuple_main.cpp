#include <iostream>

#include "ntuple/cli.hpp"

int main(int argc, char** argv) { return ntuple::run_cli(argc, argv, std::cout, std::cerr); }
