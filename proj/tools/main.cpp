#include <string>
#include <vector>

#include "routepe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return routepe::cli::run(args);
}
