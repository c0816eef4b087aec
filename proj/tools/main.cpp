#include <iostream>

#include "rideshare/commands.hpp"

int main(int argc, char** argv) { return rideshare::run_cli(argc, argv, std::cout, std::cerr); }
