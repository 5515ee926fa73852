#pragma once

#include "deltabound/errors.hpp"

namespace deltabound {

/// Tolerance budget shared by the quadrature engine and the special
/// function evaluators.
struct AccuracyBudget {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;

    AccuracyBudget() = default;
    AccuracyBudget(double rel, double abs) : rel_tol(rel), abs_tol(abs) {
        if (!(rel_tol > 0.0) || rel_tol > 1e-6)
            throw DomainError("AccuracyBudget: rel_tol must lie in (0, 1e-6]");
        if (!(abs_tol >= 0.0))
            throw DomainError("AccuracyBudget: abs_tol must be >= 0");
    }

    static AccuracyBudget loose(double rel) { return AccuracyBudget(rel, 1e-300); }
};

}  // namespace deltabound
