#include "sarlab/cli_commands.h"

int main(int argc, char** argv) { return sarlab::cli::run(argc, argv); }
