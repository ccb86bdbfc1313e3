#include "cli/cli.hpp"

int main(int argc, char** argv) { return ndde::cli::run(argc, argv); }
