#include "cdiff/cli.hpp"

int main(int argc, char** argv) { return cdiff::run_cli(argc, argv); }
