#include <iostream>

#include "rc/app/commands.hpp"

int main(int argc, char** argv) { return rc::app::run_cli(argc, argv, std::cout, std::cerr); }
