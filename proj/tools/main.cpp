#include "sigclo/cli.hpp"

int main(int argc, char** argv) { return sigclo::run_cli(argc, argv); }
