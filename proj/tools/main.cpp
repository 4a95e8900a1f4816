#include "cli.hpp"

int main(int argc, char** argv) { return wsnc::cli::run(argc, argv); }
