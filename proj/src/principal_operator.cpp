#include "deltabound/principal_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "deltabound/quadrature.hpp"
#include "deltabound/special_functions.hpp"

namespace deltabound {

namespace {

constexpr double kPi = std::numbers::pi;

// switch to the Chebyshev fit once per-entry quadrature would dominate
constexpr std::size_t kInterpolantThreshold = 160;

double hyperbolic_diagonal(double kappa, double nu, double mu, PhysicalConstants pc) {
    const double ik = pc.inv_kinetic_scale();
    const double a = std::sqrt(1.0 + 4.0 * mu * mu * ik / kappa);
    const double b = std::sqrt(1.0 + 4.0 * nu * nu * ik / kappa);
    const double pref = 0.5 * ik / kPi;  // m / (pi hbar^2)
    if (a == b) return 0.0;
    return a < b ? pref * frullani_sinh_integral(a, b) : -pref * frullani_sinh_integral(b, a);
}

}  // namespace

double phi_diagonal(const ManifoldModel& model, double nu, double mu_i, PhysicalConstants constants) {
    if (!(nu > 0.0)) throw DomainError("phi_diagonal: nu must be > 0");
    if (!(mu_i > 0.0)) throw DomainError("phi_diagonal: mu must be > 0");
    if (is_flat(model)) {
        // (m / 2 pi hbar^2) log(nu^2 / mu^2)
        return 0.5 * constants.inv_kinetic_scale() / kPi * std::log(nu / mu_i);
    }
    if (is_hyperbolic(model))
        return hyperbolic_diagonal(std::get<Hyperbolic>(model).kappa, nu, mu_i, constants);
    throw UnsupportedBackendError("phi_diagonal: no exact diagonal on a bounds-only backend");
}

double phi_offdiagonal(const ManifoldModel& model, double nu, double dist, PhysicalConstants constants) {
    if (dist == 0.0) throw DivergenceError("phi_offdiagonal: diverges at zero separation");
    return -free_resolvent_kernel(ResolventQuery(nu, dist, model, constants));
}

PrincipalMatrix assemble(const Configuration& config, double nu) {
    return PrincipalAssembler(config).assemble(nu);
}

MatrixSplit split(const PrincipalMatrix& pm) {
    MatrixSplit out;
    out.n = pm.n;
    out.diag.resize(pm.n);
    out.offdiag = pm.entries;
    for (std::size_t i = 0; i < pm.n; ++i) {
        out.diag[i] = pm.entries[i * pm.n + i];
        out.offdiag[i * pm.n + i] = 0.0;
    }
    return out;
}

double regularized_coupling(const ManifoldModel& model, double epsilon, double mu_i,
                            PhysicalConstants constants) {
    if (!(epsilon > 0.0)) throw DomainError("regularized_coupling: epsilon must be > 0 (bare theory diverges)");
    if (!(mu_i > 0.0)) throw DomainError("regularized_coupling: mu must be > 0");
    const double hbar = constants.hbar;
    auto diag_kernel = [&](double t) -> double {
        if (is_flat(model)) return flat_heat_kernel(KernelQuery(t, 0.0, model, constants));
        if (is_hyperbolic(model))
            return hyperbolic_heat_kernel(KernelQuery(t, 0.0, model, constants), AccuracyBudget(1e-11, 1e-300));
        throw UnsupportedBackendError("regularized_coupling: needs an exact kernel backend");
    };
    auto f = [&](double t) {
        return std::exp(-mu_i * mu_i * (t - epsilon) / hbar) * diag_kernel(t) / hbar;
    };
    QuadratureResult res = integrate_from(f, epsilon, AccuracyBudget(1e-10, 1e-300), 4000,
                                          mu_i * mu_i / hbar);
    return 1.0 / res.value;
}

double regularized_phi_diagonal(const ManifoldModel& model, double epsilon, double nu, double mu_i,
                                PhysicalConstants constants) {
    if (!(epsilon > 0.0)) throw DomainError("regularized_phi_diagonal: epsilon must be > 0");
    if (!(nu > 0.0) || !(mu_i > 0.0)) throw DomainError("regularized_phi_diagonal: nu, mu must be > 0");
    if (nu == mu_i) return 0.0;  // integrands cancel identically
    const double hbar = constants.hbar;
    auto diag_kernel = [&](double t) -> double {
        if (is_flat(model)) return flat_heat_kernel(KernelQuery(t, 0.0, model, constants));
        if (is_hyperbolic(model))
            return hyperbolic_heat_kernel(KernelQuery(t, 0.0, model, constants), AccuracyBudget(1e-11, 1e-300));
        throw UnsupportedBackendError("regularized_phi_diagonal: needs an exact kernel backend");
    };
    // 1/lambda(eps) minus the resolvent tail, written as one integral of the
    // difference so the two logarithmic divergences never meet numerically
    auto f = [&](double t) {
        double u = (t - epsilon) / hbar;
        return (std::exp(-mu_i * mu_i * u) - std::exp(-nu * nu * u)) * diag_kernel(t) / hbar;
    };
    QuadratureResult res = integrate_from(f, epsilon, AccuracyBudget(1e-10, 1e-300), 4000,
                                          std::min(mu_i * mu_i, nu * nu) / hbar);
    return res.value;
}

PrincipalAssembler::PrincipalAssembler(Configuration config)
    : config_(std::make_shared<const Configuration>(std::move(config))) {
    if (is_generic(config_->model()))
        throw UnsupportedBackendError("PrincipalAssembler: cannot assemble on a bounds-only backend");
    const auto& cs = config_->centers();
    const std::size_t n = cs.size();
    dist_.assign(n * n, 0.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = distance(config_->model(), cs[i].point, cs[j].point);
            dist_[i * n + j] = d;
            dist_[j * n + i] = d;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    dist_lo_ = lo;
    dist_hi_ = hi;
}

void PrincipalAssembler::fill(double nu, std::vector<double>& buffer) const {
    if (!(nu > 0.0)) throw DomainError("PrincipalAssembler: nu must be > 0");
    const auto& cs = config_->centers();
    const std::size_t n = cs.size();
    const PhysicalConstants pc = config_->constants();
    buffer.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        buffer[i * n + i] = phi_diagonal(config_->model(), nu, cs[i].mu, pc);
    if (n == 1) return;

    const double ik = pc.inv_kinetic_scale();
    if (is_flat(config_->model())) {
        const double pref = 0.5 * ik / kPi;
        const double scale = nu * std::sqrt(ik);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double v = -pref * bessel_k0(scale * dist_[i * n + j]);
                buffer[i * n + j] = v;
                buffer[j * n + i] = v;
            }
        return;
    }
    const double kappa = std::get<Hyperbolic>(config_->model()).kappa;
    std::optional<ResolventInterpolant> itp;
    if (n > kInterpolantThreshold)
        itp.emplace(kappa, nu, dist_lo_ * (1.0 - 1e-9), dist_hi_ * (1.0 + 1e-9), pc);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = dist_[i * n + j];
            double v = itp ? -(*itp)(d) : -hyperbolic_resolvent_reduced(kappa, nu, d, pc);
            buffer[i * n + j] = v;
            buffer[j * n + i] = v;
        }
}

PrincipalMatrix PrincipalAssembler::assemble(double nu) const {
    PrincipalMatrix pm;
    pm.nu = nu;
    pm.n = config_->size();
    pm.config = config_;
    fill(nu, pm.entries);
    return pm;
}

}  // namespace deltabound
