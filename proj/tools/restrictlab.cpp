#include "restrictlab/cli.hpp"

int main(int argc, char** argv) { return restrictlab::cli::run(argc, argv); }
