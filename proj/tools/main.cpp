#include "helmdd/cli.hpp"

int main(int argc, char** argv) { return helmdd::cli_main(argc, argv); }
