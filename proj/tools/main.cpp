#include "bidi/cli.hpp"

int main(int argc, char** argv) { return bidi::cli::run(argc, argv); }
