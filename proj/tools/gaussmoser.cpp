#include <iostream>

#include "gaussmoser/cli.hpp"

int main(int argc, char** argv) {
    return gaussmoser::run_cli(argc, argv, std::cout, std::cerr);
}
