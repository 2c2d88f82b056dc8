#include <iostream>

#include "jpdsr/cli.hpp"

int main(int argc, char** argv) { return jpdsr::run_cli(argc, argv, std::cout, std::cerr); }
