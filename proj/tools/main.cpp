#include "jawtap/cli.hpp"

int main(int argc, char** argv) { return jawtap::cli::run(argc, argv); }
