#include "deltabound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deltabound/rng.hpp"

namespace deltabound {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiskMargin = 1e-12;  // points must satisfy |p|^2 < 1 - margin

double norm2(const Point& p) { return p.x * p.x + p.y * p.y; }

void check_disk_point(const Point& p) {
    if (!(norm2(p) < 1.0 - kDiskMargin))
        throw DomainError("hyperbolic point outside the Poincare disk");
}

double flat_distance(const Point& p, const Point& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

double hyperbolic_distance(double kappa, const Point& p, const Point& q) {
    check_disk_point(p);
    check_disk_point(q);
    double dx = p.x - q.x, dy = p.y - q.y;
    double w = 2.0 * (dx * dx + dy * dy) / ((1.0 - norm2(p)) * (1.0 - norm2(q)));
    // arccosh(1 + w) without cancellation for small w
    return std::log1p(w + std::sqrt(w * (w + 2.0))) / std::sqrt(kappa);
}

}  // namespace

void GenericBounds::validate() const {
    if (!(kappa >= 0.0)) throw DomainError("GenericBounds: kappa must be >= 0");
    if (!(const_C >= 0.0) || !(const_D >= 0.0))
        throw DomainError("GenericBounds: kernel constants C, D must be >= 0");
    if (!(rho > 0.0)) throw DomainError("GenericBounds: rho must be > 0");
    if (!(lambda_gap >= 0.0)) throw DomainError("GenericBounds: lambda_gap must be >= 0");
    if (n_star < 2) throw DomainError("GenericBounds: n_star must be >= 2");
    if (!(const_A > 0.0)) throw DomainError("GenericBounds: A must be > 0");
    if (!(const_B > 4.0)) throw DomainError("GenericBounds: B must be > 4");
}

double distance(const ManifoldModel& model, const Point& p, const Point& q) {
    if (is_flat(model)) return flat_distance(p, q);
    if (is_hyperbolic(model)) return hyperbolic_distance(std::get<Hyperbolic>(model).kappa, p, q);
    throw UnsupportedBackendError("distance: no metric on a bounds-only backend");
}

Point poincare_from_polar(double kappa, double r, double theta) {
    if (!(kappa > 0.0)) throw DomainError("poincare_from_polar: kappa must be > 0");
    if (!(r >= 0.0)) throw DomainError("poincare_from_polar: negative radius");
    double rho = std::tanh(0.5 * std::sqrt(kappa) * r);
    if (!(rho * rho < 1.0 - kDiskMargin))
        throw DomainError("poincare_from_polar: radius too large for disk coordinates");
    return {rho * std::cos(theta), rho * std::sin(theta)};
}

Configuration::Configuration(std::vector<Center> centers, double d_min, ManifoldModel model,
                             PhysicalConstants constants)
    : centers_(std::move(centers)), d_min_(d_min), model_(std::move(model)), constants_(constants) {
    if (centers_.empty()) throw DomainError("Configuration: need at least one center");
    if (!(d_min_ > 0.0)) throw DomainError("Configuration: d_min must be > 0");
    for (const auto& c : centers_) {
        if (!(c.mu > 0.0)) throw DomainError("Configuration: every mu must be > 0");
        if (is_hyperbolic(model_)) check_disk_point(c.point);
    }
    if (is_generic(model_)) return;  // no metric available: d_min is the caller's claim
    const double floor = d_min_ * (1.0 - 1e-9);
    for (std::size_t i = 0; i < centers_.size(); ++i)
        for (std::size_t j = i + 1; j < centers_.size(); ++j)
            if (distance(model_, centers_[i].point, centers_[j].point) < floor)
                throw DomainError("Configuration: pairwise distance below d_min");
}

double Configuration::mu_star() const {
    double m = 0.0;
    for (const auto& c : centers_) m = std::max(m, c.mu);
    return m;
}

double min_pairwise_distance(const Configuration& config) {
    const auto& cs = config.centers();
    if (cs.size() < 2) throw DomainError("min_pairwise_distance: need at least two centers");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            best = std::min(best, distance(config.model(), cs[i].point, cs[j].point));
    return best;
}

Configuration hex_lattice(double d_min, int levels, PhysicalConstants constants, double mu) {
    if (!(d_min > 0.0)) throw DomainError("hex_lattice: d_min must be > 0");
    if (levels < 0) throw DomainError("hex_lattice: levels must be >= 0");
    // axial basis: e1 = (1,0) d, e2 = (1/2, sqrt3/2) d
    const double hx = 0.5 * d_min, hy = 0.5 * std::sqrt(3.0) * d_min;
    std::vector<Center> pts;
    pts.push_back({{0.0, 0.0}, mu});
    // walk each ring: start at axial (l, 0), take l steps in each of the six
    // lattice directions
    static const int dirs[6][2] = {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}};
    for (int l = 1; l <= levels; ++l) {
        int a = l, b = 0;
        for (const auto& dir : dirs) {
            for (int s = 0; s < l; ++s) {
                pts.push_back({{a * d_min + b * hx, b * hy}, mu});
                a += dir[0];
                b += dir[1];
            }
        }
    }
    return Configuration(std::move(pts), d_min, Flat{}, constants);
}

Configuration hyperbolic_level_packing(double kappa, double d_min, int levels,
                                       PhysicalConstants constants, double mu) {
    if (!(kappa > 0.0)) throw DomainError("hyperbolic_level_packing: kappa must be > 0");
    if (!(d_min > 0.0)) throw DomainError("hyperbolic_level_packing: d_min must be > 0");
    if (levels < 0) throw DomainError("hyperbolic_level_packing: levels must be >= 0");
    const double sk = std::sqrt(kappa);
    std::vector<Center> pts;
    pts.push_back({{0.0, 0.0}, mu});
    for (int l = 1; l <= levels; ++l) {
        // two points on the circle of geodesic radius R, angular gap t, are
        // sinh(sqrt(k) s / 2) = sinh(sqrt(k) R) sin(t/2) apart
        double ratio = std::sinh(0.5 * sk * d_min) / std::sinh(sk * d_min * l);
        double alpha = 2.0 * std::asin(std::min(1.0, ratio));
        double raw = std::floor(2.0 * kPi / alpha);
        if (!(raw < 16777216.0))
            throw DomainError("hyperbolic_level_packing: level population too large");
        int count = static_cast<int>(raw);
        for (int k = 0; k < count; ++k)
            pts.push_back({poincare_from_polar(kappa, l * d_min, 2.0 * kPi * k / count), mu});
    }
    return Configuration(std::move(pts), d_min, Hyperbolic(kappa), constants);
}

Configuration poisson_disk_sample(const ManifoldModel& model, double region_radius, double d_min,
                                  std::uint64_t seed, PhysicalConstants constants, double mu) {
    if (is_generic(model)) throw UnsupportedBackendError("poisson_disk_sample: needs a metric backend");
    if (!(d_min > 0.0)) throw DomainError("poisson_disk_sample: d_min must be > 0");
    if (!(region_radius >= d_min)) throw DomainError("poisson_disk_sample: region_radius < d_min");

    SplitMix64 rng(seed);
    std::vector<Center> pts;
    pts.push_back({{0.0, 0.0}, mu});

    // crude capacity estimate just to size the attempt budget
    double cap;
    if (is_flat(model)) {
        double q = 2.0 * region_radius / d_min + 1.0;
        cap = q * q;
    } else {
        double sk = std::sqrt(std::get<Hyperbolic>(model).kappa);
        double big = std::sinh(0.5 * sk * (region_radius + 0.5 * d_min));
        double small = std::sinh(0.25 * sk * d_min);
        cap = (big / small) * (big / small);
    }
    long attempts = std::min(200000L, static_cast<long>(60.0 * std::min(cap, 3000.0)) + 1000);

    long dry = 0;  // consecutive rejections; bail early once saturated
    for (long it = 0; it < attempts && dry < 4000; ++it) {
        double u = rng.next_double(), theta = 2.0 * kPi * rng.next_double();
        Point cand;
        if (is_flat(model)) {
            double r = region_radius * std::sqrt(u);
            cand = {r * std::cos(theta), r * std::sin(theta)};
        } else {
            // uniform in hyperbolic area: A(r) ~ sinh^2(sqrt(k) r / 2)
            double kappa = std::get<Hyperbolic>(model).kappa;
            double sk = std::sqrt(kappa);
            double r = (2.0 / sk) * std::asinh(std::sqrt(u) * std::sinh(0.5 * sk * region_radius));
            cand = poincare_from_polar(kappa, r, theta);
        }
        bool ok = true;
        for (const auto& c : pts) {
            if (distance(model, c.point, cand) < d_min) {
                ok = false;
                break;
            }
        }
        if (ok) {
            pts.push_back({cand, mu});
            dry = 0;
        } else {
            ++dry;
        }
    }
    return Configuration(std::move(pts), d_min, model, constants);
}

double comparison_angle(double kappa, double side_a, double side_b, double side_c) {
    if (!(kappa >= 0.0)) throw DomainError("comparison_angle: kappa must be >= 0");
    if (!(side_a > 0.0) || !(side_b > 0.0) || !(side_c > 0.0))
        throw DomainError("comparison_angle: sides must be positive");
    if (side_c > side_a + side_b || side_c < std::abs(side_a - side_b))
        throw DomainError("comparison_angle: sides violate the triangle inequality");
    double cosv;
    if (kappa == 0.0) {
        cosv = (side_a * side_a + side_b * side_b - side_c * side_c) / (2.0 * side_a * side_b);
    } else {
        double sk = std::sqrt(kappa);
        cosv = (std::cosh(sk * side_a) * std::cosh(sk * side_b) - std::cosh(sk * side_c)) /
               (std::sinh(sk * side_a) * std::sinh(sk * side_b));
    }
    return std::acos(std::clamp(cosv, -1.0, 1.0));
}

double packing_count_bound_exact(double kappa, double d_min, int l) {
    if (l < 1) throw DomainError("packing_count_bound_exact: l must be >= 1");
    if (!(d_min > 0.0)) throw DomainError("packing_count_bound_exact: d_min must be > 0");
    if (!(kappa >= 0.0)) throw DomainError("packing_count_bound_exact: kappa must be >= 0");
    double ratio = kappa > 0.0
                       ? std::sinh(0.5 * std::sqrt(kappa) * d_min) / std::sinh(std::sqrt(kappa) * d_min * l)
                       : 0.5 / l;
    return kPi / std::asin(ratio);
}

double packing_count_bound_relaxed(double kappa, double d_min, int l) {
    if (l < 1) throw DomainError("packing_count_bound_relaxed: l must be >= 1");
    if (!(d_min > 0.0)) throw DomainError("packing_count_bound_relaxed: d_min must be > 0");
    if (!(kappa >= 0.0)) throw DomainError("packing_count_bound_relaxed: kappa must be >= 0");
    double x = std::sqrt(kappa) * d_min;
    return 2.0 * kPi * l / std::cosh(0.25 * x) * std::exp(x * l);
}

double packing_count_bound_generic(int n_star, int l) {
    if (n_star < 2) throw DomainError("packing_count_bound_generic: n_star must be >= 2");
    if (l < 1) throw DomainError("packing_count_bound_generic: l must be >= 1");
    return std::pow(static_cast<double>(n_star), static_cast<double>(l));
}

}  // namespace deltabound
