#include <iostream>

#include "lpbf/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return lpbf::run_cli(args, std::cout, std::cerr).exit_code;
}
