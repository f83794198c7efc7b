#include "actdis/cli.hpp"

int main(int argc, char** argv) { return actdis::cli::run(argc, argv); }
