#include "yanglee/cli/run.hpp"

int main(int argc, char** argv) { return yanglee::cli::run(argc, argv); }
