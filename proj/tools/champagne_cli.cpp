#include <iostream>

#include "champagne/cli.hpp"

int main(int argc, char** argv) { return champagne::cli_main(argc, argv, std::cout, std::cerr); }
