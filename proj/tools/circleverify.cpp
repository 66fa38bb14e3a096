#include <iostream>
#include <vector>

#include "circleverify/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return circleverify::run_cli(args, std::cout, std::cerr);
}
