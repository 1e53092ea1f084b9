#pragma once

namespace helmdd {

// J_0 for x >= 0 (negative arguments use evenness).
// Power series below 8, Hankel rational approximation above; absolute error below 1e-10.
double bessel_j0(double x);

}  // namespace helmdd
