#include "burr/cli.hpp"

int main(int argc, char** argv) { return burr::cli::main_impl(argc, argv); }
