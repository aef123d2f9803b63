#include <iostream>

#include "tdesign_cli.hpp"

int main(int argc, char** argv) { return tdesign::cli::run(argc, argv, std::cout, std::cerr); }
