#include <iostream>

#include "xdiscord/cli.hpp"

int main(int argc, char** argv) { return xdiscord::run_cli(argc, argv, std::cout, std::cerr); }
