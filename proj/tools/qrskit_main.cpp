#include <iostream>

#include "qrskit/cli.hpp"

int main(int argc, char** argv) {
    return qrskit::cli::run(argc, argv, std::cout, std::cerr);
}
