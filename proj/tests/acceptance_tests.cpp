// Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.
// Exits 0 only if every criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "deltabound/bounds_certificates.hpp"
#include "deltabound/geometry.hpp"
#include "deltabound/principal_operator.hpp"
#include "deltabound/quadrature.hpp"
#include "deltabound/rng.hpp"
#include "deltabound/special_functions.hpp"
#include "deltabound/spectral_solver.hpp"

using namespace deltabound;

namespace {

const PhysicalConstants kNat = PhysicalConstants::natural();

struct Outcome {
    bool pass = true;
    std::string detail;
};

#define REQUIRE_THAT(cond, ...)                             \
    do {                                                    \
        if (!(cond)) {                                      \
            out.pass = false;                               \
            char _buf[256];                                 \
            std::snprintf(_buf, sizeof _buf, __VA_ARGS__);  \
            if (!out.detail.empty()) out.detail += "; ";    \
            out.detail += _buf;                             \
            return out;                                     \
        }                                                   \
    } while (0)

Configuration single_center(const ManifoldModel& model, double mu) {
    std::vector<Center> cs{{{0.0, 0.0}, mu}};
    return Configuration(cs, 1.0, model, kNat);
}

Configuration two_flat_centers(double d, double mu1 = 1.0, double mu2 = 1.0) {
    std::vector<Center> cs{{{0.0, 0.0}, mu1}, {{d, 0.0}, mu2}};
    return Configuration(cs, d, Flat{}, kNat);
}

// --- 1: single-center bound state sits exactly at -mu^2 ------------------

Outcome criterion_single_center() {
    Outcome out;
    for (int backend = 0; backend < 2; ++backend) {
        ManifoldModel model =
            backend == 0 ? ManifoldModel(Flat{}) : ManifoldModel(Hyperbolic{1.0});
        for (double mu : {0.5, 1.0, 3.0}) {
            GroundStateResult gs =
                ground_state(single_center(model, mu), 0.3 * mu, 3.0 * mu, 1e-12);
            REQUIRE_THAT(std::abs(gs.energy + mu * mu) <= 1e-9 * mu * mu,
                         "backend %d mu=%g: E_gr=%.12g", backend, mu, gs.energy);
        }
    }
    return out;
}

// --- 2: flat closed forms vs the defining time integrals ------------------

Outcome criterion_flat_closed_forms() {
    Outcome out;
    const AccuracyBudget tight(1e-11, 1e-300);
    SplitMix64 rng(1001);
    for (int i = 0; i < 50; ++i) {
        const double nu = rng.next_in(0.3, 4.0);
        double mu = rng.next_in(0.3, 4.0);
        while (std::abs(nu - mu) < 0.05) mu = rng.next_in(0.3, 4.0);
        const double d = rng.next_in(0.3, 5.0);

        PrincipalMatrix pm = assemble(two_flat_centers(d, mu, mu), nu);

        const double diag_closed = std::log(nu / mu) / (2.0 * M_PI);
        const double diag_quad =
            integrate_zero_to_inf(
                [&](double t) {
                    return (std::exp(-mu * mu * t) - std::exp(-nu * nu * t)) / (4.0 * M_PI * t);
                },
                tight, 8000, std::min(mu * mu, nu * nu))
                .value;
        REQUIRE_THAT(std::abs(pm.at(0, 0) - diag_closed) <= 1e-10 * std::abs(diag_closed),
                     "diag closed form off at nu=%g mu=%g", nu, mu);
        REQUIRE_THAT(std::abs(pm.at(0, 0) - diag_quad) <= 1e-8 * std::abs(diag_quad),
                     "diag quadrature off at nu=%g mu=%g", nu, mu);

        const double off_closed = -bessel_k0(nu * d) / (2.0 * M_PI);
        const double off_quad =
            -integrate_zero_to_inf(
                 [&](double t) {
                     return std::exp(-nu * nu * t) * std::exp(-d * d / (4.0 * t)) /
                            (4.0 * M_PI * t);
                 },
                 tight, 8000, nu * nu)
                 .value;
        REQUIRE_THAT(std::abs(pm.at(0, 1) - off_closed) <= 1e-10 * std::abs(off_closed),
                     "offdiag closed form off at nu=%g d=%g", nu, d);
        REQUIRE_THAT(std::abs(pm.at(0, 1) - off_quad) <= 1e-8 * std::abs(off_quad),
                     "offdiag quadrature off at nu=%g d=%g", nu, d);
    }
    return out;
}

// --- 3: hyperbolic diagonal against the digamma difference ----------------

Outcome criterion_hyperbolic_diagonal() {
    Outcome out;
    SplitMix64 rng(1002);
    for (int i = 0; i < 100; ++i) {
        const double u = rng.next_in(0.2, 5.0);
        const double v = rng.next_in(0.2, 5.0);
        const double a = std::min(u, v);
        const double b = std::max(u, v) + 1e-3;  // argument contract: b > a
        const double expect = digamma(0.5 * (1.0 + b)) - digamma(0.5 * (1.0 + a));
        const double got = frullani_sinh_integral(a, b);
        REQUIRE_THAT(std::abs(got - expect) <= 1e-9 * std::max(1.0, std::abs(expect)),
                     "frullani(%g, %g) = %.12g vs %.12g", a, b, got, expect);
    }
    for (double kappa : {0.5, 1.0, 4.0})
        for (double mu : {0.7, 1.0})
            for (double nu = mu; nu <= mu + 4.0; nu += 0.5) {
                const double lb = diagonal_lower_bound(kappa, nu, mu, kNat);
                const double exact = phi_diagonal(Hyperbolic{kappa}, nu, mu, kNat);
                REQUIRE_THAT(lb <= exact + 1e-12, "bound above diagonal at kappa=%g nu=%g mu=%g",
                             kappa, nu, mu);
            }
    return out;
}

// --- 4: packing count bounds vs constructed packings ----------------------

Outcome criterion_packing() {
    Outcome out;
    for (double d : {0.5, 1.0, 2.0})
        REQUIRE_THAT(std::abs(packing_count_bound_exact(0.0, d, 1) - 6.0) <= 1e-9,
                     "flat n(1) = %.17g at d=%g", packing_count_bound_exact(0.0, d, 1), d);

    for (double kappa : {1e-10, 0.5, 1.0, 4.0}) {
        for (int l = 1; l <= 20; ++l) {
            const double relaxed = packing_count_bound_relaxed(kappa, 1.5, l);
            const double exact = packing_count_bound_exact(kappa, 1.5, l);
            REQUIRE_THAT(relaxed >= exact * (1.0 - 1e-12),
                         "relaxed < exact at kappa=%g l=%d", kappa, l);
        }
        // greedy construction: per-ring populations must sit under the bound
        const int levels = kappa > 2.0 ? 2 : 3;
        Configuration pack = hyperbolic_level_packing(kappa, 1.5, levels);
        std::vector<int> ring(static_cast<std::size_t>(levels) + 1, 0);
        for (const auto& c : pack.centers()) {
            const double r = distance(pack.model(), pack.centers()[0].point, c.point);
            const int l = static_cast<int>(std::lround(r / 1.5));
            REQUIRE_THAT(l <= levels, "stray ring index %d", l);
            ++ring[l];
        }
        for (int l = 1; l <= levels; ++l)
            REQUIRE_THAT(packing_count_bound_exact(kappa, 1.5, l) >= ring[l] * (1.0 - 1e-12),
                         "exact bound %g under constructed count %d (kappa=%g l=%d)",
                         packing_count_bound_exact(kappa, 1.5, l), ring[l], kappa, l);
    }
    return out;
}

// --- 5: Holmgren bound is never below the spectral norm -------------------

Outcome criterion_holmgren() {
    Outcome out;
    SplitMix64 rng(1003);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_in(0.0, 49.0));
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                a[i * n + j] = a[j * n + i] = rng.next_in(-1.0, 1.0);
        std::vector<double> neg(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) neg[k] = -a[k];
        const double spectral =
            std::max(-smallest_eigenvalue(a, n), -smallest_eigenvalue(neg, n));
        REQUIRE_THAT(holmgren_norm(a, n) >= spectral * (1.0 - 1e-12),
                     "violation at trial %d (n=%zu)", trial, n);
    }
    return out;
}

// --- 6 and 7: certificates vs nested truncation families ------------------

Outcome certificate_protocol(const Certificate& cert, const std::vector<Configuration>& family,
                             const std::vector<std::size_t>& sizes, double tol) {
    Outcome out;
    for (std::size_t i = 0; i < family.size(); ++i)
        REQUIRE_THAT(family[i].size() == sizes[i], "truncation %zu has %zu centers, want %zu", i,
                     family[i].size(), sizes[i]);

    std::vector<TruncationRow> rows = truncation_study(family, 2.0, tol);
    double prev = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE_THAT(rows[i].energy <= prev + 1e-9, "E_gr increased at N=%zu", rows[i].n_centers);
        prev = rows[i].energy;
        const double floor_margin = rows[i].energy - cert.energy_lower_bound;
        REQUIRE_THAT(floor_margin > 0.0, "margin %.6g at N=%zu", floor_margin, rows[i].n_centers);
    }
    for (const auto& config : family) {
        const double gate = neumann_gate(split(assemble(config, cert.nu_star)));
        REQUIRE_THAT(gate < 1.0, "gate %.6g at N=%zu", gate, config.size());
    }
    return out;
}

Outcome criterion_certificate_flat() {
    Certificate cert = certificate_ch(0.0, 2.0, 1.0, 2.0, 5.0, kNat);
    std::vector<Configuration> family;
    for (int levels : {0, 1, 2, 3, 4, 7}) family.push_back(hex_lattice(2.0, levels));
    return certificate_protocol(cert, family, {1, 7, 19, 37, 61, 169}, 1e-9);
}

Outcome criterion_certificate_hyperbolic() {
    Certificate cert = certificate_ch(1.0, 2.0, 1.0, 2.0, 5.0, kNat);
    std::vector<Configuration> family;
    for (int levels : {0, 1, 2, 3, 4})
        family.push_back(hyperbolic_level_packing(1.0, 2.0, levels));
    return certificate_protocol(cert, family, {1, 10, 82, 621, 4605}, 1e-7);
}

// --- 8: generic bound machinery is internally consistent ------------------

Outcome criterion_generic_consistency() {
    Outcome out;
    const GenericBounds gb1(1.0, 1.0, 1.0, 1.0, 0.0, 2);
    const GenericBounds gb2(0.5, 2.0, 0.5, 0.7, 0.0, 3);

    // per-level closed form == quadrature of its defining integral (both
    // kernel-bound regimes extended to the whole time ray, gap dropped)
    for (const GenericBounds* gb : {&gb1, &gb2})
        for (int l : {1, 2})
            for (double nu : {1.5, 3.0}) {
                const double d = 0.9, r = l * d;
                auto f = [&](double t) {
                    const double poly = 1.0 + r * r / t;
                    return std::exp(-nu * nu * t - r * r / (4.0 * t)) * poly * poly *
                           (gb->const_C / (4.0 * M_PI * t) +
                            gb->const_D / (4.0 * M_PI * gb->rho * gb->rho));
                };
                const double quad =
                    integrate_zero_to_inf(f, AccuracyBudget(1e-11, 1e-300), 8000, nu * nu).value;
                const double closed = offdiag_term_generic(l, *gb, d, nu, kNat);
                REQUIRE_THAT(std::abs(closed - quad) <= 1e-8 * closed,
                             "term l=%d nu=%g: closed %.12g vs quad %.12g", l, nu, closed, quad);
            }

    for (double nu : {1.0, 2.0, 5.0}) {
        GenericNormBound nb = offdiag_norm_bound_generic(gb1, 1.0, nu, kNat);
        REQUIRE_THAT(nb.closed_form >= nb.series, "closed < series at nu=%g", nu);
    }

    Certificate cert = certificate_generic(gb1, 1.0, 1.0, kNat);
    REQUIRE_THAT(certificate_margin(cert) > 0.0, "non-strict margin %.6g",
                 certificate_margin(cert));
    REQUIRE_THAT(cert.logn_valid, "separation condition fails at nu_star");
    REQUIRE_THAT(cert.nu_star * cert.d_min >= std::log(2.0), "log n_star condition violated");
    return out;
}

// --- 9: renormalization flow ----------------------------------------------

Outcome criterion_flow() {
    Outcome out;
    for (int backend = 0; backend < 2; ++backend) {
        ManifoldModel model =
            backend == 0 ? ManifoldModel(Flat{}) : ManifoldModel(Hyperbolic{1.0});
        const double nu = 1.7, mu = 0.9;
        const double limit = phi_diagonal(model, nu, mu, kNat);
        double prev_gap = std::numeric_limits<double>::infinity();
        double prev_lambda = std::numeric_limits<double>::infinity();
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const double gap = std::abs(regularized_phi_diagonal(model, eps, nu, mu, kNat) - limit);
            REQUIRE_THAT(gap < prev_gap, "gap not shrinking at eps=%g (backend %d)", eps, backend);
            prev_gap = gap;
            const double lambda = regularized_coupling(model, eps, mu, kNat);
            REQUIRE_THAT(lambda > 0.0 && lambda < prev_lambda,
                         "coupling not decreasing at eps=%g (backend %d)", eps, backend);
            prev_lambda = lambda;
        }
    }
    return out;
}

// --- 10: two-center energy diverges as the separation closes --------------

Outcome criterion_divergence() {
    Outcome out;
    double e[3];
    const double d[3] = {1.0, 0.1, 0.01};
    for (int i = 0; i < 3; ++i)
        e[i] = ground_state(two_flat_centers(d[i]), 0.5, 4.0, 1e-10).energy;
    REQUIRE_THAT(e[2] < e[1] && e[1] < e[0], "ordering broken: %.6g %.6g %.6g", e[0], e[1], e[2]);
    REQUIRE_THAT(e[1] < 2.0 * e[0], "E(0.1)=%.6g not twice E(1)=%.6g", e[1], e[0]);
    REQUIRE_THAT(e[2] < 2.0 * e[1], "E(0.01)=%.6g not twice E(0.1)=%.6g", e[2], e[1]);
    return out;
}

struct Criterion {
    const char* label;
    std::function<Outcome()> run;
    double budget_seconds;  // 0 = untimed
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"single-center exactness", criterion_single_center, 1.0},
        {"flat closed forms vs time integrals", criterion_flat_closed_forms, 10.0},
        {"hyperbolic diagonal oracle", criterion_hyperbolic_diagonal, 0.0},
        {"packing count bounds", criterion_packing, 0.0},
        {"Holmgren soundness", criterion_holmgren, 0.0},
        {"flat certificate vs hex truncations", criterion_certificate_flat, 120.0},
        {"hyperbolic certificate vs packing truncations", criterion_certificate_hyperbolic, 0.0},
        {"generic bound consistency", criterion_generic_consistency, 0.0},
        {"renormalization flow", criterion_flow, 0.0},
        {"two-center divergence", criterion_divergence, 0.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.pass && criteria[i].budget_seconds > 0.0 && elapsed > criteria[i].budget_seconds) {
            out.pass = false;
            out.detail = "over time budget";
        }
        std::printf("criterion %2zu: %s  %s (%.2f s)%s%s\n", i + 1, out.pass ? "PASS" : "FAIL",
                    criteria[i].label, elapsed, out.detail.empty() ? "" : "  -- ",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
