#include <iostream>

#include "tzeta/cli.hpp"

int main(int argc, char** argv) { return tzeta::run_cli(argc, argv, std::cout); }
