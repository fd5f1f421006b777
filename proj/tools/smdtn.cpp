#include <iostream>

#include "smdtn/cli.hpp"

int main(int argc, char** argv) { return smdtn::cli::main(argc, argv, std::cout, std::cerr); }
