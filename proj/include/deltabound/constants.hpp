#pragma once

#include "deltabound/errors.hpp"

namespace deltabound {

/// Planck constant and particle mass threaded through every kernel and
/// operator formula. Natural units (hbar = 1, mass = 1/2) make
/// hbar^2/2m = 1 and 2m/hbar^2 = 1.
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 0.5;

    PhysicalConstants() = default;
    PhysicalConstants(double hbar_, double mass_) : hbar(hbar_), mass(mass_) {
        if (!(hbar > 0.0)) throw DomainError("PhysicalConstants: hbar must be > 0");
        if (!(mass > 0.0)) throw DomainError("PhysicalConstants: mass must be > 0");
    }

    static PhysicalConstants natural() { return {}; }

    // hbar^2 / 2m, the kinetic scale in front of the Laplacian
    double kinetic_scale() const { return hbar * hbar / (2.0 * mass); }
    // 2m / hbar^2
    double inv_kinetic_scale() const { return 2.0 * mass / (hbar * hbar); }
    // hbar / 2m, the diffusion constant of the heat semigroup
    double diffusion() const { return hbar / (2.0 * mass); }
};

}  // namespace deltabound
