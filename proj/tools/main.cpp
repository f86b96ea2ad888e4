#include "bitret/cli.hpp"

int main(int argc, char** argv) { return bitret::run_command(argc, argv); }
