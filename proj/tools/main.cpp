#include <iostream>

#include "gramlex/cli.hpp"

int main(int argc, char** argv) { return gramlex::cli::run(argc, argv, std::cout, std::cerr); }
