#include "cvekw/cli.hpp"

int main(int argc, char** argv) { return cvekw::run_cli(argc, argv); }
