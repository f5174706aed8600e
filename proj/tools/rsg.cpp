#include "rsg/cli.hpp"

int main(int argc, char** argv) { return rsg::run_cli(argc, argv); }
