#include <iostream>
#include <string>
#include <vector>

#include "sha_predict/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return sha_predict::cli::run(args, std::cout, std::cerr);
}
