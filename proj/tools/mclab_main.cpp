#include "mclab/lab.hpp"

int main(int argc, char** argv) { return mclab::cli_main(argc, argv); }
