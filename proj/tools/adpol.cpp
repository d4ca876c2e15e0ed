#include <iostream>

#include "adpol/cli.hpp"

int main(int argc, char** argv) { return adpol::run_cli(argc, argv, std::cout, std::cerr); }
