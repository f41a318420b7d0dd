#include "oaspmdp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return oasp::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
