#include <string>
#include <vector>

#include "poshawk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return poshawk::run_cli(args);
}
