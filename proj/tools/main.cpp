#include "cli.hpp"

int main(int argc, char** argv) { return rqmc::cli::cli_main(argc, argv); }
