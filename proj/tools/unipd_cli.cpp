#include <iostream>

#include "unipd/harness/cli.hpp"

int main(int argc, char** argv) { return unipd::harness::cli_run(argc, argv, std::cout, std::cerr); }
