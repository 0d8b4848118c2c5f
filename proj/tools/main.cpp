#include <iostream>

#include "fppu/tools/cli.hpp"

int main(int argc, char** argv) { return fppu::tools::run_cli(argc, argv, std::cout, std::cerr); }
