#pragma once

namespace nodal {

// ln erfc(x), accurate far into the tail (x up to ~1e150).
double log_erfc(double x);

// ln of the asymptotic factor S(x) in erfc(x) = exp(-x^2) S(x) / (x sqrt(pi)),
// valid for large x.
double log_erfc_asymptotic_factor(double x);

// Euclidean n-ball volume and (n-1)-sphere area
double log_ball_volume(int n, double r);
double ball_volume(int n, double r);
double log_sphere_area(int n);

double log_factorial(int k);

}  // namespace nodal
