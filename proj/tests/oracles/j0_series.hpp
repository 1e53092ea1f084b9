#pragma once

// J0 by its power series in long double; accurate to ~1e-12 for x <= 20.
inline long double j0_series(long double x) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = -x * x / 4.0L;
  for (int m = 1; m < 120; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
  }
  return sum;
}
