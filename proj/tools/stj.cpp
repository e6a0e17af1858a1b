#include "stj/cli.hpp"

int main(int argc, char** argv) { return stj::cli::run(argc, argv); }
