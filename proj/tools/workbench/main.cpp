#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return workbench::runCli(argc, argv, std::cout, std::cerr); }
