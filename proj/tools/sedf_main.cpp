#include "sedf/cli.hpp"

int main(int argc, char** argv) { return sedf::run_cli(argc, argv); }
