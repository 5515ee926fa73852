"""Bound states and certified energy lower bounds for point interactions on
2D flat and hyperbolic manifolds."""

from ._core import (
    Center,
    Certificate,
    CertificateRegime,
    Configuration,
    DeltaboundError,
    EigenFlow,
    Flat,
    GenericBounds,
    GroundStateResult,
    Hyperbolic,
    PhysicalConstants,
    Point,
    VerificationReport,
    assemble,
    bessel_k0,
    bessel_k1,
    certificate_ch,
    certificate_generic,
    certificate_margin,
    comparison_angle,
    configuration_to_json,
    count_bound_states_below,
    digamma,
    distance,
    eigenflow,
    free_resolvent_kernel,
    frullani_sinh_integral,
    ground_state,
    heat_kernel,
    heat_kernel_upper_gaussian,
    hex_lattice,
    holmgren_norm,
    hyperbolic_level_packing,
    min_pairwise_distance,
    negative_eigenvalue_count,
    neumann_gate,
    packing_count_bound_exact,
    packing_count_bound_generic,
    packing_count_bound_relaxed,
    parse_config_file,
    parse_config_text,
    phi_diagonal,
    phi_offdiagonal,
    poincare_from_polar,
    poisson_disk_sample,
    regularized_coupling,
    regularized_phi_diagonal,
    smallest_eigenvalue,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
