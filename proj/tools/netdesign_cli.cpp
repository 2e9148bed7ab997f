#include "netdesign/cli.hpp"

int main(int argc, char** argv) { return netdesign::run_cli(argc, argv); }
