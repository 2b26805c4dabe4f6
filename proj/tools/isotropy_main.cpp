#include <iostream>

#include "dyniso/commands.hpp"

int main(int argc, char** argv) { return dyniso::cli::run(argc, argv, {std::cout, std::cerr}); }
