#include "tapgp/experiment.hpp"

int main(int argc, char** argv) { return tapgp::cli_main(argc, argv); }
