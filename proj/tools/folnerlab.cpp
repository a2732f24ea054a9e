#include <iostream>
#include <vector>

#include "folnerlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return folnerlab::run_cli(args, std::cout, std::cerr);
}
