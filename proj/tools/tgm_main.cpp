#include "tgm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return tgm::cli::run(argc, argv, std::cout, std::cerr);
}
