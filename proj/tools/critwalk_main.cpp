#include "critwalk/cli.hpp"

int main(int argc, char** argv) { return critwalk::cli::run(argc, argv); }
