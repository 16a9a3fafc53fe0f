#include "commands.hpp"

int main(int argc, char** argv) { return qenergy::cli::run(argc, argv); }
