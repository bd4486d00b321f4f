#include "hsv/cli.hpp"

int main(int argc, char** argv) { return hsv::run_cli(argc, argv); }
