#include "mves/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mves::cli::run(argc, argv, std::cout, std::cerr); }
