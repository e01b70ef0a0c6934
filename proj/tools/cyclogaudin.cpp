#include <iostream>

#include "cyclogaudin/cli.hpp"

int main(int argc, char** argv) { return cg::cli::run(argc, argv, std::cout, std::cerr); }
