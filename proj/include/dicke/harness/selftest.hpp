// selftest.hpp — Built-in oracle checks runnable from the CLI

#pragma once

#include <ostream>

namespace dicke::harness {

// Runs the quick oracle suites (operator construction vs the unsymmetrized
// basis, reduced density vs brute-force partial trace, propagator vs an ODE
// integrator, schedule arithmetic, gradient spot checks). Prints one line per
// check; returns 0 when everything passes.
int run_selftest(std::ostream& out);

}  // namespace dicke::harness
