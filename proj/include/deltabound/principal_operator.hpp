#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "deltabound/geometry.hpp"
#include "deltabound/heat_kernels.hpp"

namespace deltabound {

// Dense symmetric matrix of the renormalized operator at energy E = -nu^2.
struct PrincipalMatrix {
    double nu = 0.0;
    std::size_t n = 0;
    std::vector<double> entries;  // row-major n x n
    std::shared_ptr<const Configuration> config;

    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

struct MatrixSplit {
    std::size_t n = 0;
    std::vector<double> diag;     // n
    std::vector<double> offdiag;  // row-major n x n, zero diagonal
};

// Diagonal entry: flat is the exact log formula, hyperbolic the exact
// xi-integral (antisymmetric under nu <-> mu, zero at nu = mu).
double phi_diagonal(const ManifoldModel& model, double nu, double mu_i,
                    PhysicalConstants constants = PhysicalConstants::natural());

// Off-diagonal entry -G(nu, dist), always strictly negative.
double phi_offdiagonal(const ManifoldModel& model, double nu, double dist,
                       PhysicalConstants constants = PhysicalConstants::natural());

PrincipalMatrix assemble(const Configuration& config, double nu);

MatrixSplit split(const PrincipalMatrix& pm);

// Bare coupling lambda(epsilon) fixed by placing the single-center bound
// state at -mu^2; vanishes logarithmically as epsilon -> 0+.
double regularized_coupling(const ManifoldModel& model, double epsilon, double mu_i,
                            PhysicalConstants constants = PhysicalConstants::natural());

// Pre-limit diagonal at cutoff epsilon; converges to phi_diagonal.
double regularized_phi_diagonal(const ManifoldModel& model, double epsilon, double nu, double mu_i,
                                PhysicalConstants constants = PhysicalConstants::natural());

// Repeated-assembly helper: caches the pairwise distance matrix once and,
// on the hyperbolic backend at larger N, evaluates off-diagonal entries
// through a per-nu Chebyshev fit instead of one quadrature per entry.
class PrincipalAssembler {
public:
    explicit PrincipalAssembler(Configuration config);

    const Configuration& config() const { return *config_; }
    std::size_t size() const { return config_->size(); }

    // writes Phi(nu) into `buffer` (resized to n*n, row-major)
    void fill(double nu, std::vector<double>& buffer) const;
    PrincipalMatrix assemble(double nu) const;

private:
    std::shared_ptr<const Configuration> config_;
    std::vector<double> dist_;  // row-major n x n, zero diagonal
    double dist_lo_ = 0.0, dist_hi_ = 0.0;
};

}  // namespace deltabound
