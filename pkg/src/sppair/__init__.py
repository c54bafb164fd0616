"""Radial ground states of a coupled Schrodinger-Poisson pair.

Library layout:

- :mod:`sppair.radial`     grid, volume quadrature, Laplacian, Coulomb potential
- :mod:`sppair.angular`    angle-averaged power nonlinearity and its derivatives
- :mod:`sppair.functional` action, field-equation residual, identity ledger
- :mod:`sppair.scalar`     single-equation ground states (building blocks)
- :mod:`sppair.solvers`    coupled solvers for all parameter regimes
- :mod:`sppair.audits`     executable checks of the structural theorems
- :mod:`sppair.reporting`  JSON/CSV persistence and figure rendering
- :mod:`sppair.cli`        config-driven scenario runner
"""

__version__ = "0.1.0"

from .angular import AngularRule, angular_density, angular_force, angular_hessian, cp_constant, make_rule
from .functional import (
    FieldPair,
    IdentityLedger,
    ModelParams,
    constraint_G,
    energy,
    gradient,
    hessian_quadform,
    ledger,
    nehari_J,
    pohozaev_P,
    pohozaev_residual,
)
from .radial import (
    GridConfigError,
    RadialField,
    RadialGrid,
    field_from_callable,
    laplacian,
    make_grid,
    poisson_cross,
    solve_poisson,
    volume_integral,
    zero_field,
)

__all__ = [
    "AngularRule",
    "FieldPair",
    "GridConfigError",
    "IdentityLedger",
    "ModelParams",
    "RadialField",
    "RadialGrid",
    "angular_density",
    "angular_force",
    "angular_hessian",
    "constraint_G",
    "cp_constant",
    "energy",
    "field_from_callable",
    "gradient",
    "hessian_quadform",
    "laplacian",
    "ledger",
    "make_grid",
    "make_rule",
    "nehari_J",
    "poisson_cross",
    "pohozaev_P",
    "pohozaev_residual",
    "solve_poisson",
    "volume_integral",
    "zero_field",
]
