#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "deltabound/constants.hpp"
#include "deltabound/errors.hpp"

namespace deltabound {

struct Flat {};

// kappa > 0 means sectional curvature -kappa (the hyperbolic plane of
// curvature -kappa). Points live in the Poincare disk.
struct Hyperbolic {
    double kappa;
    explicit Hyperbolic(double kappa_) : kappa(kappa_) {
        if (!(kappa > 0.0)) throw DomainError("Hyperbolic: kappa must be > 0");
    }
};

// Heat-kernel bound constants for a manifold we cannot evaluate kernels on.
// Only the bound/certificate machinery accepts this backend.
//   const_A, const_B: Gaussian upper bound A/(4pi(hbar/2m)t) e^{-2md^2/(B hbar t)}
//   const_C, const_D: small-/large-time prefactors of the generic upper bound
//   rho:              crossover length between the two time regimes
//   lambda_gap:       spectral gap entering e^{-lambda t/hbar}
//   n_star:           replica base for the level-counting bound n(l) <= n_star^l
// C or D may be zero (degenerate bound, used by limiting checks); B must
// exceed 4 or the Gaussian bound fails to dominate the kernel.
struct GenericBounds {
    double kappa = 0.0;
    double const_C = 1.0;
    double const_D = 1.0;
    double rho = 1.0;
    double lambda_gap = 0.0;
    int n_star = 2;
    double const_A = 2.0;
    double const_B = 5.0;

    GenericBounds() = default;
    GenericBounds(double kappa_, double C, double D, double rho_, double lambda_gap_,
                  int n_star_, double A = 2.0, double B = 5.0)
        : kappa(kappa_), const_C(C), const_D(D), rho(rho_), lambda_gap(lambda_gap_),
          n_star(n_star_), const_A(A), const_B(B) {
        validate();
    }
    void validate() const;
};

using ManifoldModel = std::variant<Flat, Hyperbolic, GenericBounds>;

inline bool is_flat(const ManifoldModel& m) { return std::holds_alternative<Flat>(m); }
inline bool is_hyperbolic(const ManifoldModel& m) { return std::holds_alternative<Hyperbolic>(m); }
inline bool is_generic(const ManifoldModel& m) { return std::holds_alternative<GenericBounds>(m); }

// Cartesian (x, y) on the flat backend; Poincare-disk coordinates with
// x^2 + y^2 < 1 - 1e-12 on the hyperbolic one.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Center {
    Point point;
    double mu;  // single-center bound-state scale, E = -mu^2 in isolation
};

double distance(const ManifoldModel& model, const Point& p, const Point& q);

// Disk point at geodesic distance r from the origin, polar angle theta.
Point poincare_from_polar(double kappa, double r, double theta);

// Interaction centers with a certified minimum pairwise separation.
// Construction re-verifies every invariant; on the GenericBounds backend the
// separation cannot be computed and d_min is taken on trust (coordinates are
// carried but unused there).
class Configuration {
public:
    Configuration(std::vector<Center> centers, double d_min, ManifoldModel model,
                  PhysicalConstants constants = PhysicalConstants::natural());

    const std::vector<Center>& centers() const { return centers_; }
    double d_min() const { return d_min_; }
    const ManifoldModel& model() const { return model_; }
    const PhysicalConstants& constants() const { return constants_; }
    std::size_t size() const { return centers_.size(); }
    double mu_star() const;  // sup_i mu_i (max over the finite list)

private:
    std::vector<Center> centers_;
    double d_min_;
    ManifoldModel model_;
    PhysicalConstants constants_;
};

double min_pairwise_distance(const Configuration& config);

// Triangular lattice within `levels` rings of the origin; ring l holds 6l
// points, nearest neighbors exactly d_min apart.
Configuration hex_lattice(double d_min, int levels, PhysicalConstants constants = PhysicalConstants::natural(),
                          double mu = 1.0);

// Greedy hyperbolic packing: level l is a geodesic circle of radius l*d_min
// holding floor(2pi/alpha_l) equally spaced points, alpha_l the smallest
// angle keeping neighbors d_min apart.
Configuration hyperbolic_level_packing(double kappa, double d_min, int levels,
                                       PhysicalConstants constants = PhysicalConstants::natural(),
                                       double mu = 1.0);

// Dart-throwing sampler in the geodesic ball of the given radius; the origin
// is always kept, everything else is rejection-sampled. Deterministic per seed.
Configuration poisson_disk_sample(const ManifoldModel& model, double region_radius, double d_min,
                                  std::uint64_t seed,
                                  PhysicalConstants constants = PhysicalConstants::natural(),
                                  double mu = 1.0);

// Angle opposite side_c in the constant-curvature model space (law of
// cosines; kappa = 0 is Euclidean, kappa > 0 curvature -kappa).
double comparison_angle(double kappa, double side_a, double side_b, double side_c);

// Per-level packing-count bounds. kappa = 0 is accepted as the analytic flat
// limit everywhere (arcsin argument -> 1/(2l), sech -> 1, exp -> 1).
double packing_count_bound_exact(double kappa, double d_min, int l);
double packing_count_bound_relaxed(double kappa, double d_min, int l);
double packing_count_bound_generic(int n_star, int l);

}  // namespace deltabound
