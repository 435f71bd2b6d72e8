#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return stacharge::cli::dispatch(argc, argv, std::cout, std::cerr); }
