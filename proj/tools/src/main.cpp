#include <iostream>

#include "socv_cli/run.hpp"

int main(int argc, char** argv) { return socv::cli::run(argc, argv, std::cout, std::cerr); }
