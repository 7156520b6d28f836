#include "psts/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return psts::cli::main(argc, argv, std::cout, std::cerr);
}
