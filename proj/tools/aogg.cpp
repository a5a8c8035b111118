#include "aogg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return aogg::run_cli(argc, argv, std::cout, std::cerr); }
