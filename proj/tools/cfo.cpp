#include "cfo/cli/app.hpp"

#include <iostream>

int main( int argc, char** argv ) { return cfo::cli::run( argc, argv, std::cin, std::cout, std::cerr ); }
