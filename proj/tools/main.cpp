#include "cli.hpp"

int main(int argc, char** argv) { return nppopt::cli::run(argc, argv); }
