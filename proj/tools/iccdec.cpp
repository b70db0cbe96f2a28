#include "iccdec/cli.hpp"

int main(int argc, char** argv) { return iccdec::run_cli(argc, argv); }
