#include <iostream>

#include "cxnprobe/commands.hpp"

int main(int argc, char** argv) { return cxnprobe::cli::run(argc, argv, std::cout, std::cerr); }
