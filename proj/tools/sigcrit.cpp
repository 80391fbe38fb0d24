#include "sigcrit/cli.hpp"

int main(int argc, char** argv) { return sigcrit::cli::run(argc, argv); }
