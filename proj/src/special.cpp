#include "nodal/special.hpp"

#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// erfc(x) sqrt(pi) x exp(x^2) via the Laplace continued fraction, x >= 5
double erfc_cf_factor(double x) {
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return x / f;
  }
  throw NumericalError("log_erfc: continued fraction did not converge");
}

}  // namespace

double log_erfc_asymptotic_factor(double x) {
  // 1 - 1/(2x^2) + 3/(2x^2)^2 - 15/(2x^2)^3 + ...
  double inv = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    double next = -term * (2 * k - 1) * inv;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::log(sum);
}

double log_erfc(double x) {
  if (x < 5.0) return std::log(std::erfc(x));
  double lead = -x * x - std::log(x * kSqrtPi);
  if (x <= 30.0) return lead + std::log(erfc_cf_factor(x));
  return lead + log_erfc_asymptotic_factor(x);
}

double log_ball_volume(int n, double r) {
  if (n < 1 || !(r >= 0)) throw PreconditionError("ball volume: bad arguments");
  return 0.5 * n * std::log(std::numbers::pi) + n * std::log(r) - std::lgamma(0.5 * n + 1.0);
}

double ball_volume(int n, double r) { return std::exp(log_ball_volume(n, r)); }

double log_sphere_area(int n) {
  if (n < 1) throw PreconditionError("sphere area: n < 1");
  return std::log(2.0) + 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n);
}

double log_factorial(int k) { return std::lgamma(k + 1.0); }

}  // namespace nodal
