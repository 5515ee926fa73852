#pragma once

#include "deltabound/accuracy.hpp"

namespace deltabound {

/// Modified Bessel function K0. Series below x = 2, Thompson-Barnett
/// continued fraction above. When the value underflows to zero the
/// optional flag is set instead of raising.
double bessel_k0(double x, bool* underflow = nullptr);

/// Modified Bessel function K1, same scheme and contract as bessel_k0.
double bessel_k1(double x, bool* underflow = nullptr);

/// Digamma function for x > 0 (argument shift plus asymptotic series).
double digamma(double x);

/// Integral of (exp(-a*xi) - exp(-b*xi)) / sinh(xi) over xi in
/// (0, infinity), for b > a > 0, by adaptive quadrature. Equals
/// digamma((1+b)/2) - digamma((1+a)/2); the identity is exercised in
/// tests, never assumed here.
double frullani_sinh_integral(double a, double b,
                              AccuracyBudget budget = AccuracyBudget(1e-10, 1e-300));

}  // namespace deltabound
