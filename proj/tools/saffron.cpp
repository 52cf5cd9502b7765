#include "saffron/cli.hpp"

int main(int argc, char** argv) { return saffron::cli::run_main(argc, argv); }
