#include "cli.hpp"

int main(int argc, char** argv) { return impactis::cli::run(argc, argv); }
