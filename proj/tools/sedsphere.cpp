#include <iostream>

#include "sedsphere/cli.hpp"

int main(int argc, char** argv) {
    return sedsphere::cli::main_entry(argc, argv, std::cout, std::cerr);
}
