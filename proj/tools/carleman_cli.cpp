#include <iostream>

#include "carleman/cli.hpp"

int main(int argc, char** argv) { return carleman::cli::run(argc, argv, std::cout, std::cerr); }
