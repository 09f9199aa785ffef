#include <iostream>

#include "topowalk/cli.hpp"

int main(int argc, char** argv)
{
    return topowalk::cli::run(argc, argv, std::cout, std::cerr);
}
