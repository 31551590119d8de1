#include "loopsym/cli.hpp"

int main(int argc, char** argv) { return loopsym::cli::run(argc, argv); }
