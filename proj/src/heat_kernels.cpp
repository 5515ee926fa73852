#include "deltabound/heat_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deltabound/quadrature.hpp"
#include "deltabound/rng.hpp"
#include "deltabound/special_functions.hpp"

namespace deltabound {

namespace {

constexpr double kPi = std::numbers::pi;

double require_kappa(const ManifoldModel& model, const char* who) {
    if (!is_hyperbolic(model)) throw UnsupportedBackendError(std::string(who) + ": needs the hyperbolic backend");
    return std::get<Hyperbolic>(model).kappa;
}

// McKean integral rewritten with xi = r + s^2 and
// cosh(xi) - cosh(r) = 2 sinh(r + s^2/2) sinh(s^2/2), which keeps the
// integrand finite at the lower endpoint and free of cancellation.
// Computes  integral_r^inf  w(xi) e^{-q(xi)} / sqrt(cosh xi - cosh r) dxi
// where the caller supplies q and w through the lambda.
template <typename F>
double singular_edge_integral(double r, double s_max, F&& numerator, AccuracyBudget budget) {
    auto g = [r, &numerator](double s) {
        double xi = r + s * s;
        double denom = std::sqrt(2.0 * std::sinh(r + 0.5 * s * s) * std::sinh(0.5 * s * s));
        return 2.0 * s * numerator(xi) / denom;
    };
    QuadratureResult res = integrate(g, 0.0, s_max, budget);
    return res.value;
}

}  // namespace

double flat_heat_kernel(const KernelQuery& q) {
    if (!is_flat(q.model)) throw UnsupportedBackendError("flat_heat_kernel: model is not flat");
    const double D = q.constants.diffusion();
    return std::exp(-q.dist * q.dist / (4.0 * D * q.t)) / (4.0 * kPi * D * q.t);
}

double hyperbolic_heat_kernel(const KernelQuery& q, AccuracyBudget budget) {
    const double kappa = require_kappa(q.model, "hyperbolic_heat_kernel");
    const double tau = kappa * q.constants.diffusion() * q.t;  // dimensionless time
    const double r = std::sqrt(kappa) * q.dist;

    // truncate where the Gaussian factor is e^{-60} below its value at xi = r
    const double xi_max = std::sqrt(r * r + 240.0 * tau);
    if (!(xi_max > r)) return 0.0;
    const double s_max = std::sqrt(xi_max - r);

    double integral = singular_edge_integral(
        r, s_max, [tau](double xi) { return xi * std::exp(-xi * xi / (4.0 * tau)); }, budget);

    double pref = std::numbers::sqrt2 * kappa * std::exp(-0.25 * tau) / std::pow(4.0 * kPi * tau, 1.5);
    return pref * integral;
}

double heat_kernel_upper_gaussian(const KernelQuery& q, double A, double B) {
    if (is_generic(q.model))
        throw UnsupportedBackendError("heat_kernel_upper_gaussian: bounds-only backend has its own estimate");
    if (!(A > 0.0)) throw DomainError("heat_kernel_upper_gaussian: A must be > 0");
    if (!(B > 4.0)) throw DomainError("heat_kernel_upper_gaussian: B must be > 4");
    const double D = q.constants.diffusion();
    return A / (4.0 * kPi * D * q.t) * std::exp(-q.dist * q.dist / (B * D * q.t));
}

double heat_kernel_upper_generic(const KernelQuery& q, const GenericBounds& gb) {
    gb.validate();
    const double D = q.constants.diffusion();
    const double u = q.dist * q.dist / (D * q.t);  // 2m d^2 / (hbar t)
    const double c = (q.t <= gb.rho * gb.rho / D) ? gb.const_C : gb.const_D;
    return c / (4.0 * kPi * std::min(D * q.t, gb.rho * gb.rho)) * (1.0 + u) * (1.0 + u) *
           std::exp(-gb.lambda_gap * q.t / q.constants.hbar - 0.25 * u);
}

double free_resolvent_kernel(const ResolventQuery& q, AccuracyBudget budget) {
    if (is_generic(q.model))
        throw UnsupportedBackendError("free_resolvent_kernel: no kernel on a bounds-only backend");
    const double ik = q.constants.inv_kinetic_scale();  // 2m/hbar^2
    if (is_flat(q.model)) {
        double x = q.nu * q.dist * std::sqrt(ik);
        return 0.5 * ik / kPi * bessel_k0(x);
    }
    // hyperbolic: integrate e^{-nu^2 t/hbar} K_t dt/hbar in the dimensionless
    // time tau = kappa D t; the kernel quadrature runs tighter than the
    // outer budget so its noise stays below the Laplace error estimate
    const double kappa = std::get<Hyperbolic>(q.model).kappa;
    const double c = q.nu * q.nu * ik / kappa;
    AccuracyBudget inner(std::max(1e-12, 0.01 * budget.rel_tol), budget.abs_tol);
    auto f = [&](double tau) {
        double t = tau / (kappa * q.constants.diffusion());
        return std::exp(-c * tau) * hyperbolic_heat_kernel(KernelQuery(t, q.dist, q.model, q.constants), inner);
    };
    QuadratureResult res = integrate_zero_to_inf(f, budget, 4000, c + 0.25);
    return res.value * ik / kappa;
}

namespace {

// shared core of the reduced resolvent: returns log of
//   (m / (sqrt2 pi hbar^2)) * integral_r^inf e^{-b xi / 2} / sqrt(cosh xi - cosh r) dxi
// with the dominant e^{-b r / 2} factored out so the log survives underflow.
double reduced_log(double kappa, double nu, double dist, PhysicalConstants pc, AccuracyBudget budget) {
    if (!(kappa > 0.0)) throw DomainError("hyperbolic resolvent: kappa must be > 0");
    if (!(nu > 0.0)) throw DomainError("hyperbolic resolvent: nu must be > 0");
    if (!(dist > 0.0)) throw DivergenceError("hyperbolic resolvent: diverges at zero separation");
    const double ik = pc.inv_kinetic_scale();
    const double r = std::sqrt(kappa) * dist;
    const double b = std::sqrt(1.0 + 4.0 * nu * nu * ik / kappa);
    // residual integrand decays like e^{-(b+1) s^2 / 2}; cut at e^{-60}.
    // The dominant e^{-b r / 2} is kept outside the quadrature so the
    // integral stays O(1) and the log survives underflow of the value.
    const double s_max = std::sqrt(120.0 / (b + 1.0)) + 1.0;
    double J = singular_edge_integral(
        r, s_max, [b, r](double xi) { return std::exp(-0.5 * b * (xi - r)); }, budget);
    double pref = 0.5 * ik / (std::numbers::sqrt2 * kPi);
    return std::log(pref * J) - 0.5 * b * r;
}

}  // namespace

double hyperbolic_resolvent_reduced_log(double kappa, double nu, double dist,
                                        PhysicalConstants constants, AccuracyBudget budget) {
    return reduced_log(kappa, nu, dist, constants, budget);
}

double hyperbolic_resolvent_reduced(double kappa, double nu, double dist,
                                    PhysicalConstants constants, AccuracyBudget budget) {
    return std::exp(reduced_log(kappa, nu, dist, constants, budget));
}

ResolventInterpolant::ResolventInterpolant(double kappa, double nu, double d_lo, double d_hi,
                                           PhysicalConstants constants, int nodes)
    : d_lo_(d_lo), d_hi_(d_hi) {
    if (!(d_lo > 0.0) || !(d_hi > d_lo)) throw DomainError("ResolventInterpolant: bad distance range");
    if (nodes < 8) throw DomainError("ResolventInterpolant: too few nodes");
    std::vector<double> fx(nodes);
    const double mid = 0.5 * (d_lo + d_hi), half = 0.5 * (d_hi - d_lo);
    for (int k = 0; k < nodes; ++k) {
        double theta = kPi * (k + 0.5) / nodes;
        double d = mid + half * std::cos(theta);
        fx[k] = hyperbolic_resolvent_reduced_log(kappa, nu, d, constants);
    }
    coeffs_.assign(nodes, 0.0);
    for (int j = 0; j < nodes; ++j) {
        double acc = 0.0;
        for (int k = 0; k < nodes; ++k) acc += fx[k] * std::cos(kPi * j * (k + 0.5) / nodes);
        coeffs_[j] = 2.0 * acc / nodes;
    }
    // spot check against the direct integral on a deterministic sample
    SplitMix64 rng(0x5eed5eedULL);
    for (int i = 0; i < 24; ++i) {
        double d = rng.next_in(d_lo, d_hi);
        double exact = hyperbolic_resolvent_reduced_log(kappa, nu, d, constants);
        double got = log_value(d);
        double rel = std::abs(got - exact) / std::max(1e-30, std::abs(exact));
        checked_error_ = std::max(checked_error_, rel);
    }
}

double ResolventInterpolant::log_value(double dist) const {
    if (!(dist >= d_lo_ * (1.0 - 1e-12)) || !(dist <= d_hi_ * (1.0 + 1e-12)))
        throw DomainError("ResolventInterpolant: distance outside fitted range");
    double x = (2.0 * dist - (d_lo_ + d_hi_)) / (d_hi_ - d_lo_);
    x = std::clamp(x, -1.0, 1.0);
    // Clenshaw recurrence; coeffs_[0] carries the conventional half weight
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeffs_.size() - 1; j >= 1; --j) {
        double b0 = 2.0 * x * b1 - b2 + coeffs_[j];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + 0.5 * coeffs_[0];
}

double ResolventInterpolant::operator()(double dist) const { return std::exp(log_value(dist)); }

}  // namespace deltabound
