#include <vector>

#include "lr/harness.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lr::cli_dispatch(args);
}
