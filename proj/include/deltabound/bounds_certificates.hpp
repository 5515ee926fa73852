#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "deltabound/constants.hpp"
#include "deltabound/geometry.hpp"
#include "deltabound/principal_operator.hpp"

namespace deltabound {

enum class CertificateRegime { cartan_hadamard, flat_limit, generic };

std::string to_string(CertificateRegime regime);

// A certified spectral statement: every bound state of the configuration
// family (any center count, separation >= d_min, couplings <= mu_star)
// has energy above -nu_star^2. `energy_lower_bound` is always -nu_star^2;
// the defining inequality is re-checked by certificate_margin, never
// trusted from storage.
struct Certificate {
    double nu_star = 0.0;
    double energy_lower_bound = 0.0;
    CertificateRegime regime = CertificateRegime::flat_limit;
    double d_min = 0.0;
    double mu_star = 0.0;
    double kappa = 0.0;      // 0 in the flat limit
    double gauss_A = 0.0;    // Gaussian kernel-bound constants (unused by generic)
    double gauss_B = 0.0;
    GenericBounds params{};  // generic-regime inputs (unused otherwise)
    bool logn_valid = true;  // generic: separation condition holds at nu_star
    PhysicalConstants constants{};
};

// Schur/row-sum operator norm bound: sqrt(max abs row sum * max abs col
// sum), diagonal excluded. Equals the max abs row sum for symmetric input.
double holmgren_norm(const std::vector<double>& offdiag, std::size_t n);

// (max_i 1/D_ii) * holmgren_norm(O). A value < 1 makes the Neumann series
// of D^{-1/2} O D^{-1/2} converge, so Phi is invertible and no bound state
// sits at this nu. Returns +inf when some D_ii <= 0 (gate inapplicable).
double neumann_gate(const MatrixSplit& split);

// Lower bound on the diagonal entry at curvature -kappa; kappa = 0 is the
// exact flat closed form. Dominated by phi_diagonal everywhere.
double diagonal_lower_bound(double kappa, double nu, double mu,
                            PhysicalConstants constants = PhysicalConstants::natural());

struct RowSumBound {
    double series;       // level-sum with the relaxed packing count, exact K0
    double closed_form;  // integral-comparison closed form (dominates series)
};

// Bound on the off-diagonal absolute row sum under the Gaussian kernel
// bound with constants A, B. Throws ThresholdError below the series
// convergence scale sqrt(B kappa) * hbar / sqrt(2m).
RowSumBound offdiag_rowsum_bound_ch(double kappa, double d_min, double nu, double A, double B,
                                    PhysicalConstants constants = PhysicalConstants::natural());

// Smallest nu making the row-sum bound fall below the uniform diagonal
// lower bound, i.e. the smallest certified nu_star with E_gr > -nu_star^2.
Certificate certificate_ch(double kappa, double d_min, double mu_star, double A, double B,
                           PhysicalConstants constants = PhysicalConstants::natural());

// Per-level term of the generic off-diagonal bound: the closed form of
// integral dt/hbar e^{-nu^2 t/hbar} K_upper(t, l*d_min) extended to (0, inf),
// with the spectral-gap factor dropped (lambda_gap > 0 only shrinks it).
double offdiag_term_generic(int l, const GenericBounds& params, double d_min, double nu,
                            PhysicalConstants constants = PhysicalConstants::natural());

struct GenericNormBound {
    double closed_form;  // sum-to-integral closed form (certificates use this)
    double series;       // 20-term replica sum with relaxed Bessel factors
};

// Off-diagonal norm bound on the generic backend. Valid only where the
// separation condition sqrt(2m) d_min nu / hbar >= ln n_star holds; below
// that throws ValidityError carrying the required nu.
GenericNormBound offdiag_norm_bound_generic(const GenericBounds& params, double d_min, double nu,
                                            PhysicalConstants constants = PhysicalConstants::natural());

// Generic-backend counterpart of certificate_ch, restricted to the ray
// where the separation condition holds.
Certificate certificate_generic(const GenericBounds& params, double d_min, double mu_star,
                                PhysicalConstants constants = PhysicalConstants::natural());

// Recomputes (diagonal RHS) - (off-diagonal LHS) of the certificate's
// defining inequality at nu_star. Nonnegative for any certificate built
// by this module.
double certificate_margin(const Certificate& cert);

struct VerificationReport {
    double nu_star = 0.0;
    double energy_lower_bound = 0.0;
    double nu_gr = 0.0;
    double e_gr = 0.0;
    double margin = 0.0;  // e_gr - energy_lower_bound
    double gate = 0.0;    // neumann_gate at nu_star
    bool ok = false;      // margin > 0
};

// Solves the configuration's ground state and checks it against the
// certificate. Throws IncompatibleCertificateError when the certificate
// was issued for a different curvature, a larger separation than the
// configuration actually has, or a smaller coupling ceiling.
VerificationReport verify_certificate(const Configuration& config, const Certificate& cert);

}  // namespace deltabound
