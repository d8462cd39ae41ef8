#include <fomatch/cli.hpp>

int main(int argc, char** argv) { return fomatch::cli_main(argc, argv); }
