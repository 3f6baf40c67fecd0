#include <iostream>

#include "dsm/cli/app.hpp"

int main(int argc, char **argv) { return dsm::cli::run(argc, argv, std::cout, std::cerr); }
