#include <catch2/catch_amalgamated.hpp>
#include "meissner/runner.hpp"
