#include <iostream>

#include "aklt/cli.hpp"

int main(int argc, char** argv) { return aklt::io::run_cli(argc, argv, std::cout, std::cerr); }
