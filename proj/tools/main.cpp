#include <iostream>

#include "discordkit/cli.hpp"

int main(int argc, char** argv) { return discordkit::cli::run(argc, argv, std::cout, std::cerr); }
