#pragma once

#include <vector>

#include "deltabound/accuracy.hpp"
#include "deltabound/constants.hpp"
#include "deltabound/geometry.hpp"

namespace deltabound {

struct KernelQuery {
    double t;
    double dist;
    ManifoldModel model;
    PhysicalConstants constants;

    KernelQuery(double t_, double dist_, ManifoldModel model_,
                PhysicalConstants constants_ = PhysicalConstants::natural())
        : t(t_), dist(dist_), model(std::move(model_)), constants(constants_) {
        if (!(t > 0.0)) throw DomainError("KernelQuery: t must be > 0");
        if (!(dist >= 0.0)) throw DomainError("KernelQuery: dist must be >= 0");
    }
};

// Laplace-side query: energy E = -nu^2 on the negative real axis.
struct ResolventQuery {
    double nu;
    double dist;
    ManifoldModel model;
    PhysicalConstants constants;

    ResolventQuery(double nu_, double dist_, ManifoldModel model_,
                   PhysicalConstants constants_ = PhysicalConstants::natural())
        : nu(nu_), dist(dist_), model(std::move(model_)), constants(constants_) {
        if (!(nu > 0.0)) throw DomainError("ResolventQuery: nu must be > 0");
        if (!(dist > 0.0)) throw DomainError("ResolventQuery: dist must be > 0");
    }
};

// exp(-d^2/(4Dt)) / (4 pi D t) with D = hbar/2m.
double flat_heat_kernel(const KernelQuery& q);

// Heat kernel of the plane with curvature -kappa, by adaptive quadrature of
// the McKean integral with the endpoint singularity substituted away.
double hyperbolic_heat_kernel(const KernelQuery& q,
                              AccuracyBudget budget = AccuracyBudget(1e-9, 1e-300));

// Gaussian upper bound A/(4 pi D t) exp(-d^2/(B D t)); valid on
// Cartan-Hadamard backends for suitable (A, B), B > 4.
double heat_kernel_upper_gaussian(const KernelQuery& q, double A, double B);

// Two-regime upper bound c/(4 pi min(Dt, rho^2)) (1 + d^2/Dt)^2
// exp(-lambda t/hbar - d^2/(4Dt)), c = C below the crossover time rho^2/D
// and c = D beyond it.
double heat_kernel_upper_generic(const KernelQuery& q, const GenericBounds& gb);

// Integral of e^{-nu^2 t/hbar} K_t(d) dt/hbar. Flat backend is closed form
// (m/pi hbar^2) K0(sqrt(2m) nu d / hbar); hyperbolic goes through the
// Laplace-transform quadrature of the kernel above.
double free_resolvent_kernel(const ResolventQuery& q,
                             AccuracyBudget budget = AccuracyBudget(1e-8, 1e-300));

// Same hyperbolic value through a single xi-integral (the t-integral done
// in closed form under the McKean representation): much cheaper, pinned
// against free_resolvent_kernel in tests.
double hyperbolic_resolvent_reduced(double kappa, double nu, double dist,
                                    PhysicalConstants constants = PhysicalConstants::natural(),
                                    AccuracyBudget budget = AccuracyBudget(1e-11, 1e-300));

// log of the above, stable even where the value itself underflows.
double hyperbolic_resolvent_reduced_log(double kappa, double nu, double dist,
                                        PhysicalConstants constants = PhysicalConstants::natural(),
                                        AccuracyBudget budget = AccuracyBudget(1e-11, 1e-300));

// Chebyshev fit of log G(nu, d) in d over [d_lo, d_hi] at fixed nu; used to
// assemble large hyperbolic operator matrices without one quadrature per
// entry. Build cost is `nodes` quadratures; evaluation is a Clenshaw sum.
class ResolventInterpolant {
public:
    ResolventInterpolant(double kappa, double nu, double d_lo, double d_hi,
                         PhysicalConstants constants = PhysicalConstants::natural(),
                         int nodes = 96);

    double operator()(double dist) const;      // G(nu, dist)
    double log_value(double dist) const;       // log G(nu, dist)
    double max_checked_rel_error() const { return checked_error_; }
    double d_lo() const { return d_lo_; }
    double d_hi() const { return d_hi_; }

private:
    double d_lo_, d_hi_;
    std::vector<double> coeffs_;
    double checked_error_ = 0.0;
};

}  // namespace deltabound
