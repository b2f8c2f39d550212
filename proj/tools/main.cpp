#include "commands.hpp"

int main(int argc, char** argv) { return fleetsup::cli::main_entry(argc, argv); }
