#include <iostream>

#include "singulim/cli.hpp"

int main(int argc, char** argv) { return singulim::run_cli(argc, argv, std::cout, std::cerr); }
