#include "helmdd/bessel.hpp"

#include <cmath>
#include <numbers>

namespace helmdd {

namespace {

double series(double x) {
  double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= -q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

template <std::size_t N>
double poly(const double (&c)[N], double z) {
  double r = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) r = r * z + c[i];
  return r;
}

constexpr double PC[] = {2.2779090197304684302e+04, 4.1345386639580765797e+04,
                         2.1170523380864944322e+04, 3.4806486443249270347e+03,
                         1.5376201909008354296e+02, 8.8961548424210455236e-01};
constexpr double QC[] = {2.2779090197304684318e+04, 4.1370412495510416640e+04,
                         2.1215350561880115730e+04, 3.5028735138235608207e+03,
                         1.5711159858080893649e+02, 1.0};
constexpr double PS[] = {-8.9226600200800094098e+01, -1.8591953644342993800e+02,
                         -1.1183429920482737611e+02, -2.2300261666214198472e+01,
                         -1.2441026745835638459e+00, -8.8033303048680751817e-03};
constexpr double QS[] = {5.7105024128512061905e+03, 1.1951131543434613647e+04,
                         7.2642780169211018836e+03, 1.4887231232283756582e+03,
                         9.0593769594993125859e+01, 1.0};

double hankel(double x) {
  double y = 8.0 / x;
  double y2 = y * y;
  double rc = poly(PC, y2) / poly(QC, y2);
  double rs = poly(PS, y2) / poly(QS, y2);
  double z = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (rc * std::cos(z) - y * rs * std::sin(z));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  return x < 8.0 ? series(x) : hankel(x);
}

}  // namespace helmdd
