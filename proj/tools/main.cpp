#include <iostream>

#include "traindyn/cli.hpp"

int main(int argc, char** argv) { return traindyn::run_cli(argc, argv, std::cout, std::cerr); }
