#include "qg/cli.hpp"

int main(int argc, char** argv) { return qg::cli::run(argc, argv); }
