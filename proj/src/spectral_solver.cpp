#include "deltabound/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <lapacke.h>

#include "deltabound/heat_kernels.hpp"

namespace deltabound {

namespace {

// above this size the bisection avoids eigenvalue solves and tests
// definiteness by Cholesky instead (one final eigensolve for the residual)
constexpr std::size_t kDirectEigenMax = 1200;

void check_symmetric(const std::vector<double>& a, std::size_t n) {
    if (a.size() != n * n) throw ContractViolationError("matrix buffer size does not match n*n");
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(1.0, scale);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a[i * n + j] - a[j * n + i]) > tol)
                throw ContractViolationError("matrix is not symmetric within 1e-12");
}

// All LAPACK calls below use the column-major interface: every matrix here
// is symmetric, so the row-major buffer reads identically in column-major
// and LAPACKE skips its internal transpose copy (which matters at N ~ 5000).

double smallest_eig_lapack(std::vector<double> a, std::size_t n) {
    std::vector<double> w(n);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2);
    double z = 0.0;  // unused with jobz='N', but must be a valid address
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', static_cast<lapack_int>(n),
                                     a.data(), static_cast<lapack_int>(n), 0.0, 0.0, 1, 1, 0.0, &m,
                                     w.data(), &z, 1, isuppz.data());
    if (info != 0) throw Error("dsyevr failed with info " + std::to_string(info));
    return w[0];
}

bool is_positive_definite(std::vector<double>& a, std::size_t n) {
    lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n));
    if (info < 0) throw Error("dpotrf failed with info " + std::to_string(info));
    return info == 0;
}

// full eigensystem, for the small dense solves (resolvent correction);
// eigenvector k comes back contiguous at a[k*n .. k*n+n)
void full_eigensystem(std::vector<double>& a, std::size_t n, std::vector<double>& w) {
    w.resize(n);
    lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n), a.data(),
                                    static_cast<lapack_int>(n), w.data());
    if (info != 0) throw Error("dsyev failed with info " + std::to_string(info));
}

double free_resolvent_value(const Configuration& config, double nu, const Point& x, const Point& p) {
    double d = distance(config.model(), x, p);
    if (!(d > 0.0)) throw DivergenceError("resolvent_correction: point coincides with a center");
    if (is_flat(config.model()))
        return free_resolvent_kernel(ResolventQuery(nu, d, config.model(), config.constants()));
    return hyperbolic_resolvent_reduced(std::get<Hyperbolic>(config.model()).kappa, nu, d,
                                        config.constants());
}

}  // namespace

double smallest_eigenvalue(const std::vector<double>& matrix, std::size_t n) {
    if (n == 0) throw DomainError("smallest_eigenvalue: empty matrix");
    check_symmetric(matrix, n);
    return smallest_eig_lapack(matrix, n);
}

double smallest_eigenvalue(const PrincipalMatrix& pm) { return smallest_eigenvalue(pm.entries, pm.n); }

int negative_eigenvalue_count(const std::vector<double>& matrix, std::size_t n) {
    if (n == 0) throw DomainError("negative_eigenvalue_count: empty matrix");
    check_symmetric(matrix, n);
    std::vector<double> a = matrix;
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), ipiv.data());
    if (info < 0) throw Error("dsytrf failed with info " + std::to_string(info));
    // walk the block-diagonal factor: 1x1 blocks contribute their sign, 2x2
    // blocks (negative pivots) have det < 0, i.e. exactly one negative eig,
    // unless the trace says otherwise
    int neg = 0;
    for (std::size_t i = 0; i < n;) {
        if (ipiv[i] > 0) {
            if (a[i * n + i] < 0.0) ++neg;
            ++i;
        } else {
            double d11 = a[i + i * n], d22 = a[(i + 1) + (i + 1) * n], d12 = a[i + (i + 1) * n];
            double det = d11 * d22 - d12 * d12;
            if (det < 0.0)
                ++neg;
            else if (d11 + d22 < 0.0)
                neg += 2;
            i += 2;
        }
    }
    return neg;
}

GroundStateResult ground_state(const Configuration& config, double nu_lo, double nu_hi, double tol) {
    if (!(nu_lo > 0.0) || !(nu_hi > nu_lo)) throw DomainError("ground_state: need 0 < nu_lo < nu_hi");
    if (!(tol > 0.0) || tol > 0.1) throw DomainError("ground_state: tol out of range");
    PrincipalAssembler assembler(config);
    const std::size_t n = assembler.size();
    const bool direct = n <= kDirectEigenMax;
    std::vector<double> buf;

    // g(nu) = lambda_min(Phi(nu)) when we solve eigenvalues, otherwise only
    // its sign via Cholesky; lambda_min is nondecreasing in nu either way
    auto eval = [&](double nu) -> double {
        assembler.fill(nu, buf);
        if (direct) return smallest_eig_lapack(buf, n);
        return is_positive_definite(buf, n) ? 1.0 : -1.0;
    };

    GroundStateResult out;
    double glo = eval(nu_lo);
    ++out.iterations;
    for (int k = 0; glo >= 0.0; ++k) {
        if (glo == 0.0) break;
        if (k >= 60) throw NoCrossingError("ground_state: no sign change while shrinking nu_lo");
        nu_lo *= 0.5;
        glo = eval(nu_lo);
        ++out.iterations;
    }
    double ghi = eval(nu_hi);
    ++out.iterations;
    for (int k = 0; ghi <= 0.0; ++k) {
        if (k >= 60)
            throw NoCrossingError(
                "ground_state: lambda_min still negative after 60 doublings of nu_hi; "
                "a separation/certificate check of the configuration is advisable");
        nu_hi *= 2.0;
        ghi = eval(nu_hi);
        ++out.iterations;
    }

    // Illinois-damped secant on the eigenvalue when it is available, plain
    // bisection on the definiteness predicate otherwise
    double a = nu_lo, b = nu_hi, fa = glo, fb = ghi;
    if (glo == 0.0) {
        a = b = nu_lo;
    } else {
        while (b - a > tol * std::max(a, tol)) {
            double mid;
            if (direct && std::isfinite(fa) && std::isfinite(fb) && fb > fa) {
                mid = (a * fb - b * fa) / (fb - fa);  // regula falsi
                const double w = 0.1 * (b - a);
                mid = std::clamp(mid, a + w, b - w);  // keep genuine progress
            } else {
                mid = 0.5 * (a + b);
            }
            double fm = eval(mid);
            ++out.iterations;
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if (fm < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
            if (out.iterations > 400) throw Error("ground_state: iteration budget exhausted");
        }
    }

    out.nu_lo = a;
    out.nu_hi = b;
    out.nu_gr = 0.5 * (a + b);
    out.energy = -out.nu_gr * out.nu_gr;
    assembler.fill(out.nu_gr, buf);
    out.residual = std::abs(smallest_eig_lapack(buf, n));
    return out;
}

int count_bound_states_below(const Configuration& config, double nu) {
    if (!(nu > 0.0)) throw DomainError("count_bound_states_below: nu must be > 0");
    PrincipalMatrix pm = assemble(config, nu);
    return negative_eigenvalue_count(pm.entries, pm.n);
}

EigenFlow eigenflow(const Configuration& config, const std::vector<double>& nu_grid) {
    if (nu_grid.empty()) throw DomainError("eigenflow: empty grid");
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        if (!(nu_grid[i] > 0.0)) throw DomainError("eigenflow: grid values must be > 0");
        if (i > 0 && !(nu_grid[i] > nu_grid[i - 1]))
            throw DomainError("eigenflow: grid must be strictly increasing");
    }
    PrincipalAssembler assembler(config);
    EigenFlow flow;
    flow.nu_grid = nu_grid;
    std::vector<double> buf;
    double scale = 0.0;
    for (double nu : nu_grid) {
        assembler.fill(nu, buf);
        double lam = smallest_eig_lapack(buf, assembler.size());
        flow.lambda_min.push_back(lam);
        flow.neg_counts.push_back(negative_eigenvalue_count(buf, assembler.size()));
        scale = std::max(scale, std::abs(lam));
    }
    for (std::size_t i = 1; i < flow.lambda_min.size(); ++i)
        if (flow.lambda_min[i] < flow.lambda_min[i - 1] - 1e-10 * std::max(1.0, scale))
            throw ContractViolationError("eigenflow: lambda_min decreased along increasing nu");
    return flow;
}

std::vector<TruncationRow> truncation_study(const std::vector<Configuration>& family, double nu_hint,
                                            double tol) {
    if (family.empty()) throw DomainError("truncation_study: empty family");
    for (std::size_t k = 1; k < family.size(); ++k) {
        const auto& small = family[k - 1].centers();
        const auto& big = family[k].centers();
        if (big.size() < small.size())
            throw DomainError("truncation_study: family sizes must be nondecreasing");
        for (std::size_t i = 0; i < small.size(); ++i) {
            bool same = std::abs(small[i].point.x - big[i].point.x) <= 1e-12 &&
                        std::abs(small[i].point.y - big[i].point.y) <= 1e-12 &&
                        small[i].mu == big[i].mu;
            if (!same) throw DomainError("truncation_study: family is not prefix-nested");
        }
    }
    std::vector<TruncationRow> rows;
    for (const auto& config : family) {
        double mu_min = std::numeric_limits<double>::infinity();
        for (const auto& c : config.centers()) mu_min = std::min(mu_min, c.mu);
        double lo = 0.5 * mu_min;
        double hi = std::max({nu_hint, config.mu_star() * 1.5, 1.0 / config.d_min()});
        GroundStateResult gs = ground_state(config, lo, hi, tol);
        rows.push_back({config.size(), gs.nu_gr, gs.energy});
    }
    return rows;
}

double resolvent_correction(const Configuration& config, double nu, const Point& x, const Point& y) {
    if (!(nu > 0.0)) throw DomainError("resolvent_correction: nu must be > 0");
    PrincipalMatrix pm = assemble(config, nu);
    const std::size_t n = pm.n;
    std::vector<double> vecs = pm.entries, w;
    full_eigensystem(vecs, n, w);
    double top = 0.0;
    for (double lam : w) top = std::max(top, std::abs(lam));
    for (double lam : w)
        if (std::abs(lam) <= 1e-10 * std::max(1.0, top))
            throw AtBoundStateError("resolvent_correction: Phi(nu) is singular at this energy");

    std::vector<double> gx(n), gy(n);
    for (std::size_t i = 0; i < n; ++i) {
        gx[i] = free_resolvent_value(config, nu, x, config.centers()[i].point);
        gy[i] = free_resolvent_value(config, nu, y, config.centers()[i].point);
    }
    // Phi^{-1} = V diag(1/w) V^T, eigenvector k contiguous in `vecs`
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double px = 0.0, py = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            px += vecs[k * n + i] * gx[i];
            py += vecs[k * n + i] * gy[i];
        }
        total += px * py / w[k];
    }
    return total;
}

}  // namespace deltabound
