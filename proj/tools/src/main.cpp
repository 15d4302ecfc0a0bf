#include "conrap/cli.hpp"

int main(int argc, char** argv) { return conrap::cli_main(argc, argv); }
