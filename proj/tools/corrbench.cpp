#include <vector>
#include <string>

#include "corrbench/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return corrbench::run_cli(std::move(args));
}
