#include <iostream>

#include "subnls/cli.hpp"

int main(int argc, char** argv) { return subnls::run_cli(argc, argv, std::cout, std::cerr); }
