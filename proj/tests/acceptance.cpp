// Acceptance suite: one check per criterion, one printed line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "yule/experiments.hpp"

TEST_CASE("acceptance criteria") {
    const auto results = yule::run_acceptance(20240601, "");
    yule::print_acceptance(results, std::cout);
    for (const auto& c : results) {
        CAPTURE(c.index);
        CAPTURE(c.name);
        bool passed = c.passed;
        CHECK_MESSAGE(passed, "criterion ", c.index, " (", c.name, ") failed");
    }
}
