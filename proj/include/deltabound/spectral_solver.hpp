#pragma once

#include <cstddef>
#include <vector>

#include "deltabound/principal_operator.hpp"

namespace deltabound {

struct GroundStateResult {
    double nu_gr = 0.0;
    double energy = 0.0;  // -nu_gr^2
    int iterations = 0;
    double nu_lo = 0.0, nu_hi = 0.0;  // final bracket
    double residual = 0.0;            // |lambda_min(Phi(nu_gr))|
};

struct EigenFlow {
    std::vector<double> nu_grid;
    std::vector<double> lambda_min;
    std::vector<int> neg_counts;
};

struct TruncationRow {
    std::size_t n_centers = 0;
    double nu_gr = 0.0;
    double energy = 0.0;
};

// Smallest eigenvalue of a dense symmetric matrix (row-major n x n).
// Rejects matrices that are not symmetric within 1e-12 of their scale.
double smallest_eigenvalue(const std::vector<double>& matrix, std::size_t n);
double smallest_eigenvalue(const PrincipalMatrix& pm);

// Number of negative eigenvalues, by the inertia of an LDL^T factorization.
int negative_eigenvalue_count(const std::vector<double>& matrix, std::size_t n);

// Locates the zero crossing of lambda_min(Phi(nu)): the ground state sits at
// E = -nu_gr^2. The bracket is repaired automatically (nu_lo halved while
// Phi(nu_lo) is positive definite, nu_hi doubled while it is not).
GroundStateResult ground_state(const Configuration& config, double nu_lo, double nu_hi,
                               double tol = 1e-10);

// Bound states with energy below -nu^2 = negative eigenvalues of Phi(nu).
int count_bound_states_below(const Configuration& config, double nu);

// lambda_min and inertia along an increasing nu grid; raises if the computed
// flow ever decreases (the flow is provably nondecreasing, so a violation
// means a numerical defect, not physics).
EigenFlow eigenflow(const Configuration& config, const std::vector<double>& nu_grid);

// Ground-state energies for a nested family of configurations (each one a
// prefix of the next). nu_hint seeds the upper bracket.
std::vector<TruncationRow> truncation_study(const std::vector<Configuration>& family,
                                            double nu_hint, double tol = 1e-10);

// Finite-rank resolvent correction  sum_ij G(x, p_i) [Phi^-1]_ij G(p_j, y).
double resolvent_correction(const Configuration& config, double nu, const Point& x, const Point& y);

}  // namespace deltabound
