#include "heun/cli.hpp"

int main(int argc, char** argv) { return heun::cli_main(argc, argv); }
