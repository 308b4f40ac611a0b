#include <iostream>

#include "qpm/commands.hpp"

int main(int argc, char** argv) { return qpm::run_cli(argc, argv, std::cout, std::cerr); }
