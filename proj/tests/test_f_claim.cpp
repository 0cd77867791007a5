#include <gtest/gtest.h>

#include <numbers>

#include "qlg/theory.hpp"

using namespace qlg;

// Claimed: f = 1 + O(alpha), so |f - 1| < 0.2 whenever alpha <= 0.1.
TEST(QuantumFFactor, CloseToOneForSmallAlpha) {
  for (double alpha : {0.1, 0.05, 0.01}) {
    const double theta = std::atan(1.0 / alpha);  // zeta = xi = 0 gives alpha = cot(theta)
    for (double rho = 0.1; rho < 1.95; rho += 0.1) {
      EXPECT_LT(std::abs(quantum_f_factor(Quantum{theta, 0.0, 0.0}, rho) - 1.0), 0.2)
          << "alpha=" << alpha << " rho=" << rho;
    }
  }
}
