#include "ys/cli.hpp"

int main(int argc, char** argv) { return ys::cli::run(argc, argv); }
