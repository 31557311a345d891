#include <iostream>

#include "spinchain/config.hpp"

int main(int argc, char** argv) { return spinchain::run_cli(argc, argv, std::cout, std::cerr); }
