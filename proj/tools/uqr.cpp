#include <iostream>
#include <vector>

#include "uqr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return uqr::cli::run(args, std::cout, std::cerr);
}
