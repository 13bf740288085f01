#include "localgcl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return localgcl::cli::run(argc, argv, std::cout, std::cerr);
}
