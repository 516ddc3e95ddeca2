#include "krylov_app.hpp"

#include <iostream>

int main(int argc, char** argv) { return krylov::app::run_cli(argc, argv, std::cout, std::cerr); }
