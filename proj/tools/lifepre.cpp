#include <iostream>

#include "lifepre/cli.hpp"

int main(int argc, char** argv) { return lifepre::run_cli(argc, argv, std::cout, std::cerr); }
