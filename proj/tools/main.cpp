#include "oligodyn/cli.hpp"

int main(int argc, char** argv) { return oligodyn::cli::run(argc, argv); }
