#include <iostream>

#include "gausscap_cli/app.hpp"

int main(int argc, char** argv) { return gausscap::cli::run(argc, argv, std::cout, std::cerr); }
