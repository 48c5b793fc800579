#include "nlsbox/cli.hpp"

int main(int argc, char** argv) { return nlsbox::cli::run(argc, argv); }
