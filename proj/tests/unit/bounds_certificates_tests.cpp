#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "deltabound/bounds_certificates.hpp"
#include "deltabound/geometry.hpp"
#include "deltabound/heat_kernels.hpp"
#include "deltabound/principal_operator.hpp"
#include "deltabound/quadrature.hpp"
#include "deltabound/rng.hpp"
#include "deltabound/special_functions.hpp"
#include "deltabound/spectral_solver.hpp"

using namespace deltabound;

namespace {

const PhysicalConstants kNat = PhysicalConstants::natural();

std::vector<double> random_hollow_symmetric(SplitMix64& rng, std::size_t n) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            a[i * n + j] = a[j * n + i] = rng.next_in(-1.0, 1.0);
    return a;
}

Configuration two_flat_centers(double d, double mu = 1.0) {
    std::vector<Center> cs{{{0.0, 0.0}, mu}, {{d, 0.0}, mu}};
    return Configuration(cs, d, Flat{}, kNat);
}

}  // namespace

TEST_CASE("holmgren norm dominates the spectral norm") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_in(0.0, 49.0));
        std::vector<double> a = random_hollow_symmetric(rng, n);
        std::vector<double> neg(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) neg[k] = -a[k];
        const double spectral =
            std::max(-smallest_eigenvalue(a, n), -smallest_eigenvalue(neg, n));
        const double bound = holmgren_norm(a, n);
        CHECK(bound >= spectral * (1.0 - 1e-12));
        // symmetric input: the bound collapses to the max absolute row sum
        double row_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) row += std::abs(a[i * n + j]);
            row_max = std::max(row_max, row);
        }
        CHECK(bound == doctest::Approx(row_max).epsilon(1e-13));
    }
    // 2x2 equality case: the bound is tight for a pure coupling pair
    CHECK(holmgren_norm({0.0, 0.7, 0.7, 0.0}, 2) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(holmgren_norm({1.0, 2.0, 3.0}, 2), DomainError);
}

TEST_CASE("neumann gate: closed-form anchor and inapplicable sentinel") {
    Configuration pair = two_flat_centers(1.0);
    // diag = ln(3)/2pi, |offdiag| = K0(3)/2pi  =>  gate = K0(3)/ln(3)
    const double gate = neumann_gate(split(assemble(pair, 3.0)));
    CHECK(gate == doctest::Approx(0.031621259605966448).epsilon(1e-12));
    CHECK(gate == doctest::Approx(bessel_k0(3.0) / std::log(3.0)).epsilon(1e-13));
    // gate < 1 certifies an empty spectrum below -nu^2
    CHECK(gate < 1.0);
    CHECK(count_bound_states_below(pair, 3.0) == 0);
    // at nu <= mu the diagonal is not positive: gate inapplicable
    CHECK(std::isinf(neumann_gate(split(assemble(pair, 1.0)))));
    CHECK(std::isinf(neumann_gate(split(assemble(pair, 0.7)))));
    CHECK_THROWS_AS(neumann_gate(MatrixSplit{}), DomainError);

    Configuration hex = hex_lattice(2.0, 1);
    for (double nu = 0.6; nu < 4.0; nu += 0.2) {
        if (neumann_gate(split(assemble(hex, nu))) < 1.0)
            CHECK(count_bound_states_below(hex, nu) == 0);
    }
}

TEST_CASE("diagonal lower bound: flat exactness, hyperbolic domination") {
    for (double nu : {0.5, 1.0, 2.0, 4.0})
        for (double mu : {0.4, 1.0, 1.7}) {
            CHECK(diagonal_lower_bound(0.0, nu, mu, kNat) ==
                  doctest::Approx(phi_diagonal(Flat{}, nu, mu, kNat)).epsilon(1e-14));
        }
    for (double kappa : {0.5, 1.0, 4.0})
        for (double mu : {0.7, 1.0})
            for (double nu = mu; nu < mu + 4.0; nu += 0.5) {
                const double lb = diagonal_lower_bound(kappa, nu, mu, kNat);
                CHECK(lb <= phi_diagonal(Hyperbolic{kappa}, nu, mu, kNat) + 1e-12);
                if (nu > mu) CHECK(lb > 0.0);
            }
    // vanishing curvature recovers the flat form
    CHECK(diagonal_lower_bound(1e-11, 2.0, 1.0, kNat) ==
          doctest::Approx(diagonal_lower_bound(0.0, 2.0, 1.0, kNat)).epsilon(1e-5));
    CHECK_THROWS_AS(diagonal_lower_bound(-1.0, 2.0, 1.0, kNat), DomainError);
    CHECK_THROWS_AS(diagonal_lower_bound(1.0, 0.0, 1.0, kNat), DomainError);
    CHECK_THROWS_AS(diagonal_lower_bound(1.0, 2.0, 0.0, kNat), DomainError);
}

TEST_CASE("row-sum bound: series under closed form, threshold, scaling") {
    RowSumBound rs = offdiag_rowsum_bound_ch(1.0, 2.0, 4.0, 1.0, 8.0, kNat);
    CHECK(rs.series > 0.0);
    CHECK(rs.series <= rs.closed_form);
    // first level term alone already sits under the series
    const double term1 = (1.0 / (2.0 * M_PI)) * packing_count_bound_relaxed(1.0, 2.0, 1) *
                         bessel_k0(2.0 * 2.0 * std::sqrt(1.0 / 8.0) * 4.0);
    CHECK(rs.series >= term1 * (1.0 - 1e-12));

    // decreasing in nu on both tracks
    RowSumBound rs2 = offdiag_rowsum_bound_ch(1.0, 2.0, 5.0, 1.0, 8.0, kNat);
    CHECK(rs2.series < rs.series);
    CHECK(rs2.closed_form < rs.closed_form);

    // both tracks are linear in the kernel prefactor A
    RowSumBound rs3 = offdiag_rowsum_bound_ch(1.0, 2.0, 4.0, 2.0, 8.0, kNat);
    CHECK(rs3.closed_form == doctest::Approx(2.0 * rs.closed_form).epsilon(1e-14));
    CHECK(rs3.series == doctest::Approx(2.0 * rs.series).epsilon(1e-14));

    // level series diverges at the critical point nu_c = sqrt(B kappa) (natural units)
    try {
        offdiag_rowsum_bound_ch(1.0, 2.0, 2.0, 1.0, 8.0, kNat);
        FAIL("expected ThresholdError");
    } catch (const ThresholdError& e) {
        CHECK(e.critical_nu == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
    }
    // flat limit has no threshold
    CHECK_NOTHROW(offdiag_rowsum_bound_ch(0.0, 2.0, 0.01, 1.0, 8.0, kNat));
    CHECK_THROWS_AS(offdiag_rowsum_bound_ch(1.0, 2.0, 4.0, 1.0, 4.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_rowsum_bound_ch(1.0, 2.0, 4.0, 0.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_rowsum_bound_ch(-1.0, 2.0, 4.0, 1.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_rowsum_bound_ch(1.0, 0.0, 4.0, 1.0, 8.0, kNat), DomainError);
}

TEST_CASE("curvature certificates: frozen anchors") {
    // A = 2, B = 5 are the library-wide default kernel constants
    Certificate flat1 = certificate_ch(0.0, 1.0, 1.0, 2.0, 5.0, kNat);
    CHECK(flat1.nu_star == doctest::Approx(5.9387728405999951).epsilon(1e-9));
    CHECK(flat1.regime == CertificateRegime::flat_limit);
    CHECK(flat1.energy_lower_bound ==
          doctest::Approx(-flat1.nu_star * flat1.nu_star).epsilon(1e-15));

    Certificate flat2 = certificate_ch(0.0, 2.0, 1.0, 2.0, 5.0, kNat);
    CHECK(flat2.nu_star == doctest::Approx(3.5292806620709598).epsilon(1e-9));

    Certificate flat15 = certificate_ch(0.0, 1.5, 1.0, 2.0, 5.0, kNat);
    CHECK(flat15.nu_star == doctest::Approx(4.3561697349068709).epsilon(1e-9));

    Certificate hyp = certificate_ch(1.0, 2.0, 1.0, 2.0, 5.0, kNat);
    CHECK(hyp.nu_star == doctest::Approx(4.7329224137304271).epsilon(1e-9));
    CHECK(hyp.regime == CertificateRegime::cartan_hadamard);
    CHECK(hyp.kappa == 1.0);
    CHECK(hyp.gauss_A == 2.0);
    CHECK(hyp.gauss_B == 5.0);
}

TEST_CASE("curvature certificates: nu_star is the sharp crossing point") {
    for (double kappa : {0.0, 1.0}) {
        Certificate cert = certificate_ch(kappa, 2.0, 1.0, 1.0, 8.0, kNat);
        CHECK(certificate_margin(cert) >= 0.0);
        CHECK(certificate_margin(cert) < 1e-6);  // bisection stops just past the root

        // the certified inequality in public-API form:
        // uniform diagonal lower bound vs off-diagonal row-sum closed form
        const double nu = cert.nu_star;
        CHECK(diagonal_lower_bound(kappa, nu, 1.0, kNat) >=
              offdiag_rowsum_bound_ch(kappa, 2.0, nu, 1.0, 8.0, kNat).closed_form);
        const double below = 0.999 * nu;
        CHECK(diagonal_lower_bound(kappa, below, 1.0, kNat) <
              offdiag_rowsum_bound_ch(kappa, 2.0, below, 1.0, 8.0, kNat).closed_form);

        Certificate tampered = cert;
        tampered.nu_star *= 0.999;
        CHECK(certificate_margin(tampered) < 0.0);
        // margin is recomputed from the stored inputs, not trusted
        Certificate shrunk = cert;
        shrunk.d_min = 0.5 * cert.d_min;
        CHECK(certificate_margin(shrunk) < 0.0);
    }
}

TEST_CASE("curvature certificates: monotone in every input that weakens the bound") {
    const double base = certificate_ch(0.0, 2.0, 1.0, 1.0, 8.0, kNat).nu_star;
    CHECK(certificate_ch(0.0, 1.0, 1.0, 1.0, 8.0, kNat).nu_star > base);   // tighter packing
    CHECK(certificate_ch(1.0, 2.0, 1.0, 1.0, 8.0, kNat).nu_star > base);   // curvature
    CHECK(certificate_ch(0.0, 2.0, 2.0, 1.0, 8.0, kNat).nu_star > base);   // stronger coupling
    CHECK(certificate_ch(0.0, 2.0, 1.0, 3.0, 8.0, kNat).nu_star > base);   // larger kernel A
    CHECK(certificate_ch(0.0, 2.0, 1.0, 1.0, 16.0, kNat).nu_star > base);  // larger kernel B
    CHECK(certificate_ch(0.0, 4.0, 1.0, 1.0, 8.0, kNat).nu_star < base);   // sparser packing

    CHECK_THROWS_AS(certificate_ch(-1.0, 2.0, 1.0, 1.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(certificate_ch(0.0, 0.0, 1.0, 1.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(certificate_ch(0.0, 2.0, 0.0, 1.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(certificate_ch(0.0, 2.0, 1.0, 0.0, 8.0, kNat), DomainError);
    CHECK_THROWS_AS(certificate_ch(0.0, 2.0, 1.0, 1.0, 4.0, kNat), DomainError);

    // non-natural constants round-trip through the same inequality
    const PhysicalConstants pc{2.0, 1.0};
    Certificate cert = certificate_ch(1.0, 2.0, 1.0, 1.0, 8.0, pc);
    CHECK(certificate_margin(cert) >= 0.0);
    CHECK(diagonal_lower_bound(1.0, cert.nu_star, 1.0, pc) >=
          offdiag_rowsum_bound_ch(1.0, 2.0, cert.nu_star, 1.0, 8.0, pc).closed_form);
}

TEST_CASE("generic per-level term: anchor and domination over the time integral") {
    const GenericBounds gb(1.0, 1.0, 1.0, 1.0, 0.0, 2);
    CHECK(offdiag_term_generic(1, gb, 1.0, 2.0, kNat) ==
          doctest::Approx(0.97326347140681446).epsilon(1e-12));

    // the closed form extends both time regimes to the whole ray, so it
    // dominates the directly integrated kernel bound; a positive spectral
    // gap only widens the gap between them
    const GenericBounds gb2(1.0, 1.5, 2.5, 1.2, 0.7, 3);
    for (const GenericBounds* p : {&gb, &gb2})
        for (int l : {1, 2, 3})
            for (double nu : {1.0, 2.5}) {
                const double d = 0.8;
                auto f = [&](double t) {
                    return std::exp(-nu * nu * t) *
                           heat_kernel_upper_generic(KernelQuery(t, l * d, *p, kNat), *p);
                };
                const double integral =
                    integrate_zero_to_inf(f, AccuracyBudget(1e-10, 1e-300), 4000, nu * nu).value;
                CHECK(offdiag_term_generic(l, *p, d, nu, kNat) >= integral * (1.0 - 1e-9));
            }

    CHECK_THROWS_AS(offdiag_term_generic(0, gb, 1.0, 2.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_term_generic(1, gb, 0.0, 2.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_term_generic(1, gb, 1.0, 0.0, kNat), DomainError);
}

TEST_CASE("generic norm bound: replica sum under closed form, validity ray") {
    const GenericBounds gb(1.0, 1.0, 1.0, 1.0, 0.0, 2);
    for (double nu : {1.0, 2.0, 5.0}) {
        GenericNormBound nb = offdiag_norm_bound_generic(gb, 1.0, nu, kNat);
        CHECK(nb.series > 0.0);
        CHECK(nb.series <= nb.closed_form);
        // replica sum dominates the level-weighted exact terms it relaxes
        double exact_sum = 0.0;
        double weight = 1.0;
        for (int l = 1; l <= 20; ++l) {
            weight *= gb.n_star;
            exact_sum += weight * offdiag_term_generic(l, gb, 1.0, nu, kNat);
        }
        CHECK(nb.series >= exact_sum * (1.0 - 1e-12));
    }

    // below nu = ln(n_star)/d_min the level counting is invalid
    try {
        offdiag_norm_bound_generic(gb, 1.0, 0.5, kNat);
        FAIL("expected ValidityError");
    } catch (const ValidityError& e) {
        CHECK(e.required_nu == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    }
    // exactly at the edge the bound is formally infinite but not an error
    CHECK(std::isinf(offdiag_norm_bound_generic(gb, 1.0, std::log(2.0), kNat).closed_form));

    CHECK_THROWS_AS(offdiag_norm_bound_generic(gb, 0.0, 2.0, kNat), DomainError);
    CHECK_THROWS_AS(offdiag_norm_bound_generic(gb, 1.0, 0.0, kNat), DomainError);
}

TEST_CASE("generic certificates: frozen anchors and re-substitution") {
    const GenericBounds gb1(1.0, 1.0, 1.0, 1.0, 0.0, 2);
    Certificate c1 = certificate_generic(gb1, 1.0, 1.0, kNat);
    CHECK(c1.nu_star == doctest::Approx(29.834149879403412).epsilon(1e-9));
    CHECK(c1.regime == CertificateRegime::generic);
    CHECK(c1.logn_valid);
    CHECK(c1.energy_lower_bound == doctest::Approx(-c1.nu_star * c1.nu_star).epsilon(1e-15));

    const GenericBounds gb2(0.5, 2.0, 0.5, 0.7, 0.0, 3);
    Certificate c2 = certificate_generic(gb2, 1.3, 0.8, kNat);
    CHECK(c2.nu_star == doctest::Approx(38.7726771179934).epsilon(1e-9));

    const GenericBounds gb3(0.0, 1.0, 1.0, 1.0, 0.0, 2);
    Certificate c3 = certificate_generic(gb3, 1.0, 1.0, kNat);
    CHECK(c3.nu_star == doctest::Approx(26.7312307549873).epsilon(1e-9));

    for (const Certificate* c : {&c1, &c2, &c3}) {
        CHECK(certificate_margin(*c) >= 0.0);
        Certificate tampered = *c;
        tampered.nu_star *= 0.999;
        CHECK(certificate_margin(tampered) < 0.0);
    }
    // same inequality through the public bound functions
    CHECK(diagonal_lower_bound(gb1.kappa, c1.nu_star, 1.0, kNat) >=
          offdiag_norm_bound_generic(gb1, 1.0, c1.nu_star, kNat).closed_form);
    CHECK(diagonal_lower_bound(gb1.kappa, 0.999 * c1.nu_star, 1.0, kNat) <
          offdiag_norm_bound_generic(gb1, 1.0, 0.999 * c1.nu_star, kNat).closed_form);

    // a degenerate kernel bound certifies right at max(mu_star, ln n_star);
    // the bisection parks nu_star a relative ~1e-10 above the exact edge
    const GenericBounds zero(1.0, 0.0, 0.0, 1.0, 0.0, 2);
    Certificate cz = certificate_generic(zero, 1.0, 1.0, kNat);
    CHECK(cz.nu_star == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(certificate_margin(cz) >= 0.0);

    CHECK_THROWS_AS(certificate_generic(gb1, 0.0, 1.0, kNat), DomainError);
    CHECK_THROWS_AS(certificate_generic(gb1, 1.0, 0.0, kNat), DomainError);
}

TEST_CASE("verification: report anchor on the hex lattice") {
    Configuration hex = hex_lattice(2.0, 1);
    Certificate cert = certificate_ch(0.0, 2.0, 1.0, 2.0, 5.0, kNat);
    VerificationReport report = verify_certificate(hex, cert);
    CHECK(report.ok);
    CHECK(report.margin > 0.0);
    CHECK(report.nu_gr == doctest::Approx(1.2627558874685985).epsilon(1e-6));
    CHECK(report.e_gr == doctest::Approx(-1.5945524313366077).epsilon(1e-6));
    CHECK(report.margin == doctest::Approx(10.861269563599118).epsilon(1e-6));
    CHECK(report.gate == doctest::Approx(0.0018984482427461429).epsilon(1e-9));
    CHECK(report.gate < 1.0);
    CHECK(report.nu_star == cert.nu_star);
    CHECK(report.energy_lower_bound == doctest::Approx(cert.energy_lower_bound).epsilon(1e-15));

    // sparser-than-certified configurations are covered by the same certificate
    VerificationReport sparse = verify_certificate(two_flat_centers(3.0), cert);
    CHECK(sparse.ok);
    // weaker couplings likewise
    VerificationReport weak = verify_certificate(two_flat_centers(2.0, 0.5), cert);
    CHECK(weak.ok);
}

TEST_CASE("verification: incompatible pairs are rejected, false claims fail") {
    Certificate flat = certificate_ch(0.0, 2.0, 1.0, 1.0, 8.0, kNat);

    std::vector<Center> cs{{{0.0, 0.0}, 1.0}, {poincare_from_polar(1.0, 2.0, 0.0), 1.0}};
    Configuration hyp(cs, 2.0, Hyperbolic{1.0}, kNat);
    CHECK_THROWS_AS(verify_certificate(hyp, flat), IncompatibleCertificateError);

    CHECK_THROWS_AS(verify_certificate(two_flat_centers(1.5), flat),
                    IncompatibleCertificateError);  // packs tighter than certified
    CHECK_THROWS_AS(verify_certificate(two_flat_centers(2.0, 1.5), flat),
                    IncompatibleCertificateError);  // couples stronger than certified
    CHECK_THROWS_AS(verify_certificate(two_flat_centers(2.0), Certificate{}),
                    IncompatibleCertificateError);

    std::vector<Center> gc{{{0.0, 0.0}, 1.0}, {{5.0, 0.0}, 1.0}};
    Configuration generic_config(gc, 2.0, GenericBounds(1.0, 1.0, 1.0, 1.0, 0.0, 2), kNat);
    CHECK_THROWS_AS(verify_certificate(generic_config, flat), UnsupportedBackendError);

    // a hand-written certificate claiming too deep a bound is detected
    Certificate bogus = flat;
    bogus.nu_star = 1.0;
    bogus.energy_lower_bound = -1.0;
    VerificationReport report = verify_certificate(hex_lattice(2.0, 1), bogus);
    CHECK_FALSE(report.ok);
    CHECK(report.margin < 0.0);
}
