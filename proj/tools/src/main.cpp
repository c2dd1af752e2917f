#include <iostream>

#include "sgls_cli/app.hpp"

int main(int argc, char** argv) { return sgls::cli::run(argc, argv, std::cout, std::cerr); }
