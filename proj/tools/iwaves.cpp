#include "commands.hpp"

int main(int argc, char** argv) { return iwaves::cli::main_entry(argc, argv); }
