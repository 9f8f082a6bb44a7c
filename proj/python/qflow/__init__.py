"""Python interface to the nematic-flow solver core."""

from _qflow import (  # noqa: F401
    Grid,
    Material,
    PicardReport,
    QField,
    SchemeConfig,
    Solver,
    State,
    Velocity,
    Viscosity,
    advance,
    biharmonic,
    bulk_energy,
    dissipation,
    divergence,
    free_energy,
    identity_checks,
    kinetic_energy,
    laplacian,
    max_abs_div,
    project,
    read_state,
    set_threads,
    step,
    uniaxial,
    uniaxial_bubble,
    write_state,
)

__all__ = [
    "Grid", "Material", "PicardReport", "QField", "SchemeConfig", "Solver", "State",
    "Velocity", "Viscosity", "advance", "biharmonic", "bulk_energy", "dissipation",
    "divergence", "free_energy", "identity_checks", "kinetic_energy", "laplacian",
    "max_abs_div", "project", "read_state", "set_threads", "step", "uniaxial",
    "uniaxial_bubble", "write_state",
]
