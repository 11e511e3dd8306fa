#include <string>
#include <vector>

#include "tfmd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tfmd::run_cli(args);
}
