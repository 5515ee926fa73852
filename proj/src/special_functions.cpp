#include "deltabound/special_functions.hpp"

#include <cmath>
#include <limits>

#include "deltabound/errors.hpp"
#include "deltabound/quadrature.hpp"

namespace deltabound {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008;
constexpr double kPi = 3.14159265358979323846264338328;

// I0, I1 power series; converge to machine precision for x <= 2.
double bessel_i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

double bessel_i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return 0.5 * x * sum;
}

// K0 ascending series (DLMF 10.31.2 specialized to order zero).
double bessel_k0_small(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, harmonic = 0.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        sum += term * harmonic;
        if (term * harmonic < std::abs(sum) * 1e-18 && k > 3) break;
    }
    return -(std::log(0.5 * x) + kEulerGamma) * bessel_i0_series(x) + sum;
}

// K1 ascending series (DLMF 10.31.3 specialized to order one).
double bessel_k1_small(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, hk = 0.0, hk1 = 1.0;
    double sum = term * (hk + hk1 - 2.0 * kEulerGamma);
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        sum += term * (hk + hk1 - 2.0 * kEulerGamma);
        if (std::abs(term * (hk + hk1)) < std::abs(sum) * 1e-18 && k > 3) break;
    }
    return 1.0 / x + std::log(0.5 * x) * bessel_i1_series(x) - 0.25 * x * sum;
}

// Steed/Thompson-Barnett CF2 for K0 and K1 at x >= 2. Evaluates the
// continued fraction for the confluent hypergeometric U(1/2, 1, 2x).
void bessel_k01_large(double x, double& k0, double& k1) {
    const double eps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    h = a1 * h;
    k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k0(double x, bool* underflow) {
    if (underflow) *underflow = false;
    if (!(x > 0.0)) throw DomainError("bessel_k0: argument must be > 0");
    if (x <= 2.0) return bessel_k0_small(x);
    double k0, k1;
    bessel_k01_large(x, k0, k1);
    if (k0 == 0.0 && underflow) *underflow = true;
    return k0;
}

double bessel_k1(double x, bool* underflow) {
    if (underflow) *underflow = false;
    if (!(x > 0.0)) throw DomainError("bessel_k1: argument must be > 0");
    if (x <= 2.0) return bessel_k1_small(x);
    double k0, k1;
    bessel_k01_large(x, k0, k1);
    if (k1 == 0.0 && underflow) *underflow = true;
    return k1;
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: argument must be > 0");
    double result = 0.0;
    // shift into the asymptotic regime
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // ln x - 1/(2x) - sum B_2n / (2n x^(2n))
    double series = -1.0 / 12.0 +
                    inv2 * (1.0 / 120.0 +
                            inv2 * (-1.0 / 252.0 +
                                    inv2 * (1.0 / 240.0 +
                                            inv2 * (-1.0 / 132.0 +
                                                    inv2 * (691.0 / 32760.0 +
                                                            inv2 * (-1.0 / 12.0))))));
    result += std::log(x) - 0.5 * inv + inv2 * series;
    return result;
}

double frullani_sinh_integral(double a, double b, AccuracyBudget budget) {
    if (!(a > 0.0)) throw DomainError("frullani_sinh_integral: a must be > 0");
    if (!(b > a)) throw DomainError("frullani_sinh_integral: b must exceed a");
    // Stable form: 2 e^{-(1+a)x} expm1(-(b-a)x) / expm1(-2x); finite at
    // x -> 0 (limit b - a) and free of sinh overflow for large x.
    const double gap = b - a;
    auto integrand = [a, gap](double x) {
        return 2.0 * std::exp(-(1.0 + a) * x) * std::expm1(-gap * x) /
               std::expm1(-2.0 * x);
    };
    QuadratureResult res = integrate_zero_to_inf(integrand, budget);
    return res.value;
}

}  // namespace deltabound
