#include "entangle/cli.hpp"

int main(int argc, char** argv) { return entangle::cli::run(argc, argv); }
