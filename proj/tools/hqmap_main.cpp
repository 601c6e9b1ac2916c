#include "hqmap/cli.hpp"

int main(int argc, char** argv) { return hqmap::cli::main(argc, argv); }
