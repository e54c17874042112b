#pragma once

#include <random>

#include "uflow/potential.hpp"

namespace uflow {

// Random density guaranteed inside the cone [c m, C m]: a low-frequency
// multiplicative tilt of m with amplitude kept below the renormalization
// margin (1-A)/(1+A) >= c, (1+A)/(1-A) <= C.
GridDensity random_cone_density(const EquilibriumModel& model, double c, double C,
                                std::mt19937_64& rng);

// Compactly supported C^2 test function phi(x) = s((x-x0)/w) sin(om x + th),
// s(y) = (1-y^2)^3 on |y| < 1. Support stays strictly inside (-R, R).
struct TestFunction {
  double x0 = 0.0, w = 1.0, om = 1.0, th = 0.0;
  double value(double x) const;
  double dvalue(double x) const;
  double ddvalue(double x) const;
};

TestFunction random_test_function(double R, std::mt19937_64& rng);

}  // namespace uflow
