#include "fjlab/cli.hpp"

int main(int argc, char** argv) { return fjlab::cli::run(argc, argv); }
