#include "deltabound/bounds_certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deltabound/special_functions.hpp"
#include "deltabound/spectral_solver.hpp"

namespace deltabound {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRelTol = 1e-10;  // certificate bisection, relative in nu

double sech(double x) { return 1.0 / std::cosh(x); }

// log((1 + sqrt(1 + 4 nu^2 ik / kappa)) / (1 + sqrt(1 + 4 mu^2 ik / kappa))),
// flat limit log(nu / mu). This is the uniform diagonal lower bound up to
// the m/(pi hbar^2) prefactor, which both certificates keep on the RHS.
double diagonal_log(double kappa, double nu, double mu, double ik) {
    if (kappa == 0.0) return std::log(nu / mu);
    const double b = std::sqrt(1.0 + 4.0 * nu * nu * ik / kappa);
    const double a = std::sqrt(1.0 + 4.0 * mu * mu * ik / kappa);
    return std::log((1.0 + b) / (1.0 + a));
}

// Off-diagonal norm bound without the m/hbar^2 prefactor; `inf` when the
// separation condition holds only with equality. Coefficients equal to
// zero skip their (possibly divergent) term so the degenerate C = D = 0
// bound is exactly zero on the whole valid ray.
double onon_reduced(const GenericBounds& gb, double d_min, double nu, double ik, double ks) {
    const double xbar = std::sqrt(ik) * d_min * nu;
    const double L = std::log(static_cast<double>(gb.n_star));
    const double w = xbar - L;
    const double P = ks / (gb.rho * gb.rho * nu * nu);
    const double C = gb.const_C, D = gb.const_D;
    double total = 0.0;
    if (C != 0.0) {
        total += (C / std::sqrt(2.0)) / (std::sqrt(xbar) * std::sqrt(w));
        total += (3.0 / std::sqrt(2.0)) * std::pow(xbar, 1.5) * C / std::pow(w, 2.5);
    }
    if (C != 0.0 || D != 0.0) {
        const double c2 = 12.0 * C + (D / (2.0 * kPi)) * P;
        if (c2 != 0.0) total += c2 * (2.0 * xbar - L) / (w * w);
    }
    if (D != 0.0) {
        total += (3.0 / std::sqrt(2.0)) * std::pow(xbar, 1.5) * (0.5 * D * P) / std::pow(w, 2.5);
        total += (4.0 * D / kPi) * (d_min * d_min / (gb.rho * gb.rho)) * (4.0 * xbar - L) /
                 (w * w * w * w);
    }
    return total;
}

// Finds the smallest root of g (negative below, positive above) given a lo
// with g(lo) <= 0; returns the upper end of the final bracket so g is
// strictly positive at the result.
template <typename G>
double bisect_up(G&& g, double lo) {
    double hi = 2.0 * lo;
    int guard = 0;
    while (!(g(hi) > 0.0)) {
        hi *= 2.0;
        if (++guard > 400) throw NoCrossingError("certificate: inequality never satisfied");
    }
    while (hi - lo > kRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

std::string to_string(CertificateRegime regime) {
    switch (regime) {
        case CertificateRegime::cartan_hadamard: return "cartan_hadamard";
        case CertificateRegime::flat_limit: return "flat_limit";
        case CertificateRegime::generic: return "generic";
    }
    throw DomainError("to_string: unknown certificate regime");
}

double holmgren_norm(const std::vector<double>& offdiag, std::size_t n) {
    if (offdiag.size() != n * n) throw DomainError("holmgren_norm: matrix size mismatch");
    double row_max = 0.0, col_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            row += std::abs(offdiag[i * n + j]);
            col += std::abs(offdiag[j * n + i]);
        }
        row_max = std::max(row_max, row);
        col_max = std::max(col_max, col);
    }
    return std::sqrt(row_max * col_max);
}

double neumann_gate(const MatrixSplit& split) {
    if (split.n == 0) throw DomainError("neumann_gate: empty split");
    double diag_min = std::numeric_limits<double>::infinity();
    for (double d : split.diag) diag_min = std::min(diag_min, d);
    if (!(diag_min > 0.0)) return std::numeric_limits<double>::infinity();
    return holmgren_norm(split.offdiag, split.n) / diag_min;
}

double diagonal_lower_bound(double kappa, double nu, double mu, PhysicalConstants constants) {
    if (!(kappa >= 0.0)) throw DomainError("diagonal_lower_bound: kappa must be >= 0");
    if (!(nu > 0.0) || !(mu > 0.0)) throw DomainError("diagonal_lower_bound: nu, mu must be > 0");
    const double ik = constants.inv_kinetic_scale();
    if (kappa == 0.0) return ik / (4.0 * kPi) * std::log(nu * nu / (mu * mu));
    return ik / (2.0 * kPi) * diagonal_log(kappa, nu, mu, ik);
}

RowSumBound offdiag_rowsum_bound_ch(double kappa, double d_min, double nu, double A, double B,
                                    PhysicalConstants constants) {
    if (!(kappa >= 0.0)) throw DomainError("offdiag_rowsum_bound_ch: kappa must be >= 0");
    if (!(d_min > 0.0)) throw DomainError("offdiag_rowsum_bound_ch: d_min must be > 0");
    if (!(A > 0.0)) throw DomainError("offdiag_rowsum_bound_ch: A must be > 0");
    if (!(B > 4.0)) throw DomainError("offdiag_rowsum_bound_ch: B must be > 4");
    const double ik = constants.inv_kinetic_scale();
    const double ks = constants.kinetic_scale();
    const double nu_c = std::sqrt(B * kappa * ks);
    if (!(nu > nu_c))
        throw ThresholdError("offdiag_rowsum_bound_ch: level series diverges at or below nu = " +
                                 std::to_string(nu_c),
                             nu_c);

    RowSumBound out;
    out.closed_form = (A * B / (d_min * d_min)) * sech(0.25 * std::sqrt(kappa) * d_min) /
                      (nu * (nu - nu_c));

    // level sum: terms decay at least geometrically once the Bessel decay
    // beats the packing growth, which nu > nu_c guarantees
    const double pref = A * ik / (2.0 * kPi);
    const double arg_scale = 2.0 * d_min * std::sqrt(ik / B) * nu;
    double sum = 0.0, prev = 0.0;
    for (int l = 1; l <= 2000000; ++l) {
        bool underflow = false;
        const double k0 = bessel_k0(arg_scale * l, &underflow);
        const double term = underflow ? 0.0 : pref * packing_count_bound_relaxed(kappa, d_min, l) * k0;
        sum += term;
        if (term == 0.0) break;
        if (l > 1 && term < prev) {
            const double ratio = term / prev;
            const double tail = term * ratio / (1.0 - ratio);
            if (tail < 1e-12 * std::max(1.0, sum)) break;
        }
        prev = term;
    }
    out.series = sum;

    if (out.series > out.closed_form * (1.0 + 1e-9))
        throw ContractViolationError("offdiag_rowsum_bound_ch: series exceeded its closed form");
    return out;
}

Certificate certificate_ch(double kappa, double d_min, double mu_star, double A, double B,
                           PhysicalConstants constants) {
    if (!(kappa >= 0.0)) throw DomainError("certificate_ch: kappa must be >= 0");
    if (!(d_min > 0.0)) throw DomainError("certificate_ch: d_min must be > 0");
    if (!(mu_star > 0.0)) throw DomainError("certificate_ch: mu_star must be > 0");
    if (!(A > 0.0)) throw DomainError("certificate_ch: A must be > 0");
    if (!(B > 4.0)) throw DomainError("certificate_ch: B must be > 4");
    const double ik = constants.inv_kinetic_scale();
    const double ks = constants.kinetic_scale();
    const double nu_c = std::sqrt(B * kappa * ks);
    const double lhs_scale =
        2.0 * kPi * A * B * (ks / (d_min * d_min)) * sech(0.25 * std::sqrt(kappa) * d_min);

    auto g = [&](double nu) {
        const double lhs = (kappa == 0.0) ? lhs_scale / (nu * nu) : lhs_scale / (nu * (nu - nu_c));
        return diagonal_log(kappa, nu, mu_star, ik) - lhs;
    };

    Certificate cert;
    cert.regime = (kappa == 0.0) ? CertificateRegime::flat_limit : CertificateRegime::cartan_hadamard;
    cert.d_min = d_min;
    cert.mu_star = mu_star;
    cert.kappa = kappa;
    cert.gauss_A = A;
    cert.gauss_B = B;
    cert.constants = constants;
    cert.nu_star = bisect_up(g, std::max(mu_star, nu_c));
    cert.energy_lower_bound = -cert.nu_star * cert.nu_star;
    return cert;
}

double offdiag_term_generic(int l, const GenericBounds& params, double d_min, double nu,
                            PhysicalConstants constants) {
    params.validate();
    if (l < 1) throw DomainError("offdiag_term_generic: level must be >= 1");
    if (!(d_min > 0.0)) throw DomainError("offdiag_term_generic: d_min must be > 0");
    if (!(nu > 0.0)) throw DomainError("offdiag_term_generic: nu must be > 0");
    const double ik = constants.inv_kinetic_scale();
    const double x = std::sqrt(ik) * d_min * nu * l;
    bool uf0 = false, uf1 = false;
    const double k0 = bessel_k0(x, &uf0);
    const double k1 = bessel_k1(x, &uf1);
    if (uf0 || uf1) return 0.0;
    double total = 0.0;
    if (params.const_C != 0.0)
        total += params.const_C * ik / (2.0 * kPi) * ((1.0 + 4.0 * x * x) * k0 + 12.0 * x * k1);
    if (params.const_D != 0.0)
        total += params.const_D / (4.0 * kPi * params.rho * params.rho * nu * nu) *
                 (x * (1.0 + 4.0 * x * x) * k1 + 4.0 * x * x * k0);
    return total;
}

GenericNormBound offdiag_norm_bound_generic(const GenericBounds& params, double d_min, double nu,
                                            PhysicalConstants constants) {
    params.validate();
    if (!(d_min > 0.0)) throw DomainError("offdiag_norm_bound_generic: d_min must be > 0");
    if (!(nu > 0.0)) throw DomainError("offdiag_norm_bound_generic: nu must be > 0");
    const double ik = constants.inv_kinetic_scale();
    const double ks = constants.kinetic_scale();
    const double xbar = std::sqrt(ik) * d_min * nu;
    const double L = std::log(static_cast<double>(params.n_star));
    if (xbar < L) {
        const double required = L / (std::sqrt(ik) * d_min);
        throw ValidityError("offdiag_norm_bound_generic: separation condition needs nu >= " +
                                std::to_string(required),
                            required);
    }

    GenericNormBound out;
    out.closed_form = 0.5 * ik * onon_reduced(params, d_min, nu, ik, ks);

    // replica sum with the relaxed Bessel factors; the level weight n*^l is
    // folded into the exponential so nothing overflows
    const double w = xbar - L;
    double sum = 0.0;
    for (int l = 1; l <= 20; ++l) {
        const double x = xbar * l;
        const double damp = std::exp(-l * w);
        const double sq = std::sqrt(0.5 * kPi / x);
        double term = 0.0;
        if (params.const_C != 0.0)
            term += params.const_C * ik / (2.0 * kPi) *
                    ((1.0 + 4.0 * x * x) * sq + 12.0 * x * (1.0 + 1.0 / x));
        if (params.const_D != 0.0)
            term += params.const_D / (4.0 * kPi * params.rho * params.rho * nu * nu) *
                    (x * (1.0 + 4.0 * x * x) * (1.0 + 1.0 / x) + 4.0 * x * x * sq);
        sum += damp * term;
    }
    out.series = sum;
    return out;
}

Certificate certificate_generic(const GenericBounds& params, double d_min, double mu_star,
                                PhysicalConstants constants) {
    params.validate();
    if (!(d_min > 0.0)) throw DomainError("certificate_generic: d_min must be > 0");
    if (!(mu_star > 0.0)) throw DomainError("certificate_generic: mu_star must be > 0");
    const double ik = constants.inv_kinetic_scale();
    const double ks = constants.kinetic_scale();
    const double L = std::log(static_cast<double>(params.n_star));
    const double nu_valid = L / (std::sqrt(ik) * d_min);

    auto g = [&](double nu) {
        return diagonal_log(params.kappa, nu, mu_star, ik) / kPi -
               onon_reduced(params, d_min, nu, ik, ks);
    };

    Certificate cert;
    cert.regime = CertificateRegime::generic;
    cert.d_min = d_min;
    cert.mu_star = mu_star;
    cert.kappa = params.kappa;
    cert.params = params;
    cert.constants = constants;
    const double lo = std::max(mu_star, nu_valid);
    cert.nu_star = (g(lo) > 0.0) ? lo : bisect_up(g, lo);
    cert.energy_lower_bound = -cert.nu_star * cert.nu_star;
    cert.logn_valid = std::sqrt(ik) * d_min * cert.nu_star >= L;
    return cert;
}

double certificate_margin(const Certificate& cert) {
    const double ik = cert.constants.inv_kinetic_scale();
    const double ks = cert.constants.kinetic_scale();
    const double nu = cert.nu_star;
    if (cert.regime == CertificateRegime::generic) {
        return diagonal_log(cert.kappa, nu, cert.mu_star, ik) / kPi -
               onon_reduced(cert.params, cert.d_min, nu, ik, ks);
    }
    const double nu_c = std::sqrt(cert.gauss_B * cert.kappa * ks);
    const double lhs_scale = 2.0 * kPi * cert.gauss_A * cert.gauss_B * (ks / (cert.d_min * cert.d_min)) *
                             sech(0.25 * std::sqrt(cert.kappa) * cert.d_min);
    const double lhs =
        (cert.kappa == 0.0) ? lhs_scale / (nu * nu) : lhs_scale / (nu * (nu - nu_c));
    return diagonal_log(cert.kappa, nu, cert.mu_star, ik) - lhs;
}

VerificationReport verify_certificate(const Configuration& config, const Certificate& cert) {
    if (!(cert.nu_star > 0.0)) throw IncompatibleCertificateError("verify_certificate: empty certificate");
    if (is_generic(config.model()))
        throw UnsupportedBackendError(
            "verify_certificate: ground state is not computable on a bounds-only backend");
    const double config_kappa = is_flat(config.model()) ? 0.0 : std::get<Hyperbolic>(config.model()).kappa;
    if (std::abs(cert.kappa - config_kappa) > 1e-12 * std::max(1.0, config_kappa))
        throw IncompatibleCertificateError("verify_certificate: certificate curvature " +
                                           std::to_string(cert.kappa) + " does not match configuration");
    if (config.size() >= 2) {
        const double actual = min_pairwise_distance(config);
        if (actual < cert.d_min * (1.0 - 1e-9))
            throw IncompatibleCertificateError(
                "verify_certificate: configuration packs tighter than the certified d_min");
    }
    if (config.mu_star() > cert.mu_star * (1.0 + 1e-12))
        throw IncompatibleCertificateError(
            "verify_certificate: configuration couples stronger than the certified mu_star");

    double mu_min = std::numeric_limits<double>::infinity();
    for (const auto& c : config.centers()) mu_min = std::min(mu_min, c.mu);
    const double nu_hi = std::max(1.1 * cert.nu_star, 1.5 * config.mu_star());
    GroundStateResult gs = ground_state(config, 0.5 * mu_min, nu_hi, 1e-8);

    VerificationReport report;
    report.nu_star = cert.nu_star;
    report.energy_lower_bound = -cert.nu_star * cert.nu_star;
    report.nu_gr = gs.nu_gr;
    report.e_gr = gs.energy;
    report.margin = report.e_gr - report.energy_lower_bound;
    report.gate = neumann_gate(split(assemble(config, cert.nu_star)));
    report.ok = report.margin > 0.0;
    return report;
}

}  // namespace deltabound
