#include <iostream>

#include "percomp/cli/app.hpp"

int main(int argc, char** argv) { return percomp::cli::run(argc, argv, std::cout, std::cerr); }
