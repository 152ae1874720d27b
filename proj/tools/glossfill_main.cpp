#include "glossfill/cli.hpp"

int main(int argc, char** argv) { return glossfill::cli::run(argc, argv); }
