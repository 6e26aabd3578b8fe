#include "nematoflow/cli.hpp"

int main(int argc, char** argv) { return nematoflow::cli::main_entry(argc, argv); }
