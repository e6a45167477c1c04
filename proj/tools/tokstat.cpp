#include <iostream>

#include "tokstat/cli.hpp"

int main(int argc, char** argv) { return tokstat::cli::run(argc, argv, std::cout, std::cerr); }
