#include <iostream>

#include "trustgate/cli.hpp"

int main(int argc, char** argv) { return trustgate::run_cli(argc, argv, std::cout, std::cerr); }
