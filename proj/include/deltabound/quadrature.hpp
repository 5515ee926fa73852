#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "deltabound/accuracy.hpp"
#include "deltabound/errors.hpp"

namespace deltabound {

/// Outcome of an adaptive integration. `value` is the Kronrod estimate
/// summed over the final partition, `abs_error` the accumulated
/// embedded-rule error estimate.
struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (positive
// abscissae; the rule is symmetric).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;  // K15 estimate
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel evaluate_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    fv[14] = f(mid);
    double resg = kGaussWeights[3] * fv[14];
    double resk = kKronrodWeights[7] * fv[14];
    double resabs = kKronrodWeights[7] * std::abs(fv[14]);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        fv[2 * j] = f(mid - dx);
        fv[2 * j + 1] = f(mid + dx);
        const double fsum = fv[2 * j] + fv[2 * j + 1];
        resk += kKronrodWeights[j] * fsum;
        resabs += kKronrodWeights[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
        if (j % 2 == 1) resg += kGaussWeights[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kKronrodWeights[7] * std::abs(fv[14] - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kKronrodWeights[j] * (std::abs(fv[2 * j] - reskh) +
                                        std::abs(fv[2 * j + 1] - reskh));
    }
    const double habs = std::abs(half);
    resabs *= habs;
    resasc *= habs;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return Panel{a, b, resk * half, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the finite interval
/// [a, b]. Splits the worst panel until the accumulated error estimate
/// meets the budget or the panel limit is hit.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b,
                           AccuracyBudget budget = AccuracyBudget(),
                           int max_panels = 4000) {
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    std::priority_queue<detail::Panel> queue;
    detail::Panel first = detail::evaluate_panel(f, a, b);
    result.evaluations = 15;
    double total = first.value;
    double toterr = first.error;
    queue.push(first);
    int panels = 1;
    while (panels < max_panels && !queue.empty()) {
        const double target =
            std::max(budget.abs_tol, budget.rel_tol * std::abs(total));
        if (toterr <= target) break;
        detail::Panel worst = queue.top();
        if (worst.error <= 0.0) break;  // nothing left to refine
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // panel at floating-point resolution; freeze its estimate
            toterr -= worst.error;
            queue.push(detail::Panel{worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        detail::Panel left = detail::evaluate_panel(f, worst.a, mid);
        detail::Panel right = detail::evaluate_panel(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        toterr += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }
    result.value = total;
    result.abs_error = toterr;
    result.converged =
        toterr <= std::max(budget.abs_tol, budget.rel_tol * std::abs(total));
    return result;
}

/// Integrates f over [a, infinity) through the substitution
/// t = a - log(u) / rate, u in (0, 1]. Endpoints are never evaluated, so
/// the integrand only sees finite t > a. Pass the dominant exponential
/// decay rate of f when it is far from 1: the substitution then maps the
/// tail onto u ~ const and the u-integrand stays bounded.
template <typename F>
QuadratureResult integrate_from(F&& f, double a,
                                AccuracyBudget budget = AccuracyBudget(),
                                int max_panels = 4000, double rate = 1.0) {
    if (!(rate > 0.0)) throw DomainError("integrate_from: rate must be > 0");
    auto mapped = [&f, a, rate](double u) {
        const double t = a - std::log(u) / rate;
        return f(t) / (u * rate);
    };
    return integrate(mapped, 0.0, 1.0, budget, max_panels);
}

/// Integrates f over [0, infinity).
template <typename F>
QuadratureResult integrate_zero_to_inf(F&& f,
                                       AccuracyBudget budget = AccuracyBudget(),
                                       int max_panels = 4000, double rate = 1.0) {
    return integrate_from(std::forward<F>(f), 0.0, budget, max_panels, rate);
}

}  // namespace deltabound
