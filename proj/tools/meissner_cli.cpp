#include "meissner/runner.hpp"

int main(int argc, char** argv) { return meissner::run_main(argc, argv); }
