#include <iostream>

#include "hirzebruch/cli.hpp"

int main(int argc, char** argv) {
    return hirz::cli::run(argc, argv, std::cout, std::cerr);
}
