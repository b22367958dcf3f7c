#include <iostream>

#include "gselab/cli.hpp"

int main(int argc, char** argv) { return gselab::run_cli(argc, argv, std::cout, std::cerr); }
