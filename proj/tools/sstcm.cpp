#include <iostream>

#include "sstc/cli.hpp"

int main(int argc, char** argv) { return sstc::run_cli(argc, argv, std::cout, std::cerr); }
