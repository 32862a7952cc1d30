#include "cli.hpp"

int main(int argc, char** argv) { return dfw::cli::main_entry(argc, argv); }
