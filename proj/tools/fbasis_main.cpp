#include "fbasis/cli.hpp"

int main(int argc, char** argv) { return fbasis::cli_main(argc, argv); }
