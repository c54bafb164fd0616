"""Action functional, field-equation residual, second variation and identities.

The action of a pair u = (u1, u2) is

    I(u) = 1/2 int |grad u1|^2 + |grad u2|^2 + lam (u1^2 + u2^2)
         + 1/4 int mu11 u1^2 phi_1 + mu22 u2^2 phi_2 - 2 mu12 u1^2 phi_2
         - 1/(p+1) int N_p(u1, u2),

with phi_i the Coulomb potential of u_i^2 and N_p the angle-averaged power
density.  Its critical points solve the coupled field equations

    -Delta u1 + lam u1 + (mu11 phi_1 - mu12 phi_2) u1 = F_p(u1, u2),
    -Delta u2 + lam u2 + (mu22 phi_2 - mu12 phi_1) u2 = F_p(u2, u1).

Four scalar functionals of a pair pin every identity used downstream:

    a = int |grad u1|^2 + |grad u2|^2        b = lam int u1^2 + u2^2
    c = the quadratic Coulomb term            d = int N_p(u1, u2)

Every solution satisfies a + b + c - d = 0 (multiply-and-integrate) and the
dilation identity a/2 + 3b/2 + 5c/4 - 3d/(p+1) = 0; the constrained-manifold
functional is G = 2J + P built from those two rows.

Discrete conventions chosen so the identities carry to the grid exactly:
the Dirichlet term is the volume-weighted pairing <u, -Delta_h u>, the
Coulomb cross term is symmetrized (int u1^2 phi_2 and int u2^2 phi_1 agree
in the continuum; averaging them makes J = <gradient, u> hold to rounding),
and N_p/F_p share one angular rule so d and its derivative are exactly dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .angular import (
    AngularRule,
    DegenerateHessianWarning,
    angular_density,
    angular_force,
    angular_hessian_tables,
    make_rule,
)
from .radial import (
    FieldPair,
    RadialField,
    dirichlet_inner,
    laplacian_values,
    poisson_values,
    volume_integral_values,
)

import warnings


@dataclass(frozen=True)
class ModelParams:
    """Model coefficients (lam, mu_ij, p) plus functional variants.

    ``positive_part`` switches energy/gradient to the truncated functional
    that sees only the positive parts of the fields inside the Coulomb and
    power terms.  ``power_term=False`` drops the power nonlinearity entirely
    (the zero-coupling classification regime).
    """

    lam: float
    mu11: float
    mu22: float
    mu12: float
    p: float
    positive_part: bool = False
    power_term: bool = True

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if min(self.mu11, self.mu22, self.mu12) < 0:
            raise ValueError("coupling coefficients must be nonnegative")
        if self.power_term and not 1.0 < self.p < 5.0:
            raise ValueError(f"p must be in (1, 5), got {self.p}")

    def det_mu(self) -> float:
        return self.mu11 * self.mu22 - self.mu12**2

    def a0(self) -> float:
        """Component ratio sqrt((mu11 + mu12) / (mu22 + mu12)) of the
        zero-coupling vector state (V, a0 V)."""
        return sqrt((self.mu11 + self.mu12) / (self.mu22 + self.mu12))


@dataclass(frozen=True)
class IdentityLedger:
    """The four scalar functionals (a, b, c, d) of one pair."""

    a: float
    b: float
    c: float
    d: float

    def scale(self) -> float:
        return abs(self.a) + abs(self.b) + abs(self.c) + abs(self.d)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def _parts(u: FieldPair, params: ModelParams):
    """Raw or positive-part component values per the functional variant."""
    u1 = u.first.values
    u2 = u.second.values
    if params.positive_part:
        return np.maximum(u1, 0.0), np.maximum(u2, 0.0)
    return u1, u2


def coulomb_terms(u: FieldPair, params: ModelParams):
    """Potentials (phi_1, phi_2) and the symmetrized quadratic Coulomb term c."""
    grid = u.grid
    v1, v2 = _parts(u, params)
    phi1 = poisson_values(grid, v1 * v1)
    phi2 = poisson_values(grid, v2 * v2)
    cross = 0.5 * (
        volume_integral_values(grid, v1 * v1 * phi2)
        + volume_integral_values(grid, v2 * v2 * phi1)
    )
    c = (
        params.mu11 * volume_integral_values(grid, v1 * v1 * phi1)
        + params.mu22 * volume_integral_values(grid, v2 * v2 * phi2)
        - 2.0 * params.mu12 * cross
    )
    return phi1, phi2, c


def ledger(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> IdentityLedger:
    """Compute the scalar ledger (a, b, c, d) of a pair."""
    rule = rule or make_rule()
    grid = u.grid
    u1, u2 = u.first.values, u.second.values
    a = dirichlet_inner(grid, u1, u1) + dirichlet_inner(grid, u2, u2)
    b = params.lam * (
        volume_integral_values(grid, u1 * u1) + volume_integral_values(grid, u2 * u2)
    )
    _, _, c = coulomb_terms(u, params)
    if params.power_term:
        v1, v2 = _parts(u, params)
        d = volume_integral_values(grid, angular_density(v1, v2, params.p, rule))
    else:
        d = 0.0
    return IdentityLedger(a=a, b=b, c=c, d=d)


def energy(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> float:
    """Action I(u); the truncated variant when params.positive_part is set."""
    rule = rule or make_rule()
    led = ledger(u, params, rule)
    e = 0.5 * (led.a + led.b) + 0.25 * led.c
    if params.power_term:
        e -= led.d / (params.p + 1.0)
    return e


def gradient(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> FieldPair:
    """Strong-form residual of the field equations, evaluated nodewise.

    With ``positive_part`` the Coulomb and force terms see (u_i)_+ and the
    force carries the indicator of {u_i > 0} on its cos-theta part, matching
    the derivative of the truncated action.
    """
    rule = rule or make_rule()
    grid = u.grid
    u1, u2 = u.first.values, u.second.values
    v1, v2 = _parts(u, params)
    phi1 = poisson_values(grid, v1 * v1)
    phi2 = poisson_values(grid, v2 * v2)
    r1 = -laplacian_values(grid, u1) + params.lam * u1
    r2 = -laplacian_values(grid, u2) + params.lam * u2
    r1 += (params.mu11 * phi1 - params.mu12 * phi2) * v1
    r2 += (params.mu22 * phi2 - params.mu12 * phi1) * v2
    if params.power_term:
        f1 = angular_force(v1, v2, params.p, rule)
        f2 = angular_force(v2, v1, params.p, rule)
        if params.positive_part:
            # indicator of {u_i > 0} multiplies the whole force row
            f1 = np.where(u1 > 0.0, f1, 0.0)
            f2 = np.where(u2 > 0.0, f2, 0.0)
        r1 -= f1
        r2 -= f2
    return FieldPair(RadialField(grid, r1), RadialField(grid, r2))


def gradient_pairing(u: FieldPair, g: FieldPair, psi: FieldPair) -> float:
    """Volume-weighted pairing <g, psi> used by the FD consistency checks."""
    w = u.grid.weights
    return float(
        np.dot(w, g.first.values * psi.first.values)
        + np.dot(w, g.second.values * psi.second.values)
    )


def _sym_b(grid, w, f, g):
    """Symmetrized Coulomb pairing B(f, g) = int f * P(g) dV of two densities."""
    return 0.5 * (
        float(np.dot(w, f * poisson_values(grid, g)))
        + float(np.dot(w, g * poisson_values(grid, f)))
    )


def hessian_bilinear(
    u: FieldPair,
    psi: FieldPair,
    chi: FieldPair,
    params: ModelParams,
    rule: AngularRule | None = None,
) -> float:
    """Second variation I''(u)[psi, chi], symmetric in (psi, chi) by construction."""
    rule = rule or make_rule()
    grid = u.grid
    w = grid.weights
    u1, u2 = u.first.values, u.second.values
    p1, p2 = psi.first.values, psi.second.values
    x1, x2 = chi.first.values, chi.second.values

    out = 0.5 * (
        dirichlet_inner(grid, p1, x1)
        + dirichlet_inner(grid, x1, p1)
        + dirichlet_inner(grid, p2, x2)
        + dirichlet_inner(grid, x2, p2)
    )
    out += params.lam * float(np.dot(w, p1 * x1) + np.dot(w, p2 * x2))

    out += params.mu11 * (_sym_b(grid, w, p1 * x1, u1 * u1) + 2.0 * _sym_b(grid, w, u1 * p1, u1 * x1))
    out += params.mu22 * (_sym_b(grid, w, p2 * x2, u2 * u2) + 2.0 * _sym_b(grid, w, u2 * p2, u2 * x2))
    out -= params.mu12 * (
        _sym_b(grid, w, p1 * x1, u2 * u2)
        + _sym_b(grid, w, p2 * x2, u1 * u1)
        + 2.0 * _sym_b(grid, w, u1 * p1, u2 * x2)
        + 2.0 * _sym_b(grid, w, u1 * x1, u2 * p2)
    )

    if params.power_term:
        h11, h12, h22, floored = angular_hessian_tables(u1, u2, params.p, rule)
        if floored:
            warnings.warn(
                "Hessian kernel floor active at some grid node",
                DegenerateHessianWarning,
                stacklevel=2,
            )
        out -= float(np.dot(w, h11 * p1 * x1 + h12 * (p1 * x2 + p2 * x1) + h22 * p2 * x2))
    return out


def hessian_quadform(
    u: FieldPair, psi: FieldPair, params: ModelParams, rule: AngularRule | None = None
) -> float:
    """Quadratic form I''(u)[psi, psi]."""
    return hessian_bilinear(u, psi, psi, params, rule)


def nehari_J(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> float:
    """J(u) = I'(u)u = a + b + c - d; zero at every critical point."""
    led = ledger(u, params, rule)
    return led.a + led.b + led.c - led.d


def pohozaev_P(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> float:
    """Dilation functional P; zero at every solution (sign fixed so that the
    constrained-manifold combination is G = 2J + P)."""
    led = ledger(u, params, rule)
    return pohozaev_from_ledger(led, params.p, power=params.power_term, negate=True)


def constraint_G(u: FieldPair, params: ModelParams, rule: AngularRule | None = None) -> float:
    """G(u) = 2 J(u) + P(u) = 3a/2 + b/2 + 3c/4 - (2p-1)/(p+1) d."""
    led = ledger(u, params, rule)
    return constraint_from_ledger(led, params.p)


def constraint_from_ledger(led: IdentityLedger, p: float) -> float:
    return 1.5 * led.a + 0.5 * led.b + 0.75 * led.c - (2.0 * p - 1.0) / (p + 1.0) * led.d


def pohozaev_from_ledger(
    led: IdentityLedger, p: float, power: bool = True, negate: bool = False
) -> float:
    val = 0.5 * led.a + 1.5 * led.b + 1.25 * led.c
    if power:
        val -= 3.0 / (p + 1.0) * led.d
    return -val if negate else val


def pohozaev_residual(
    u: FieldPair,
    params: ModelParams,
    A: float = 1.0,
    B: float = 1.0,
    C: float = 1.0,
    D: float = 1.0,
    rule: AngularRule | None = None,
) -> float:
    """Weighted dilation identity residual

        (A/2) a + (3B/2) b + (5C/4) c - (3D/(p+1)) d,

    which vanishes on solutions of the (A,B,C,D)-weighted system.  The
    gradient-squared Coulomb terms are evaluated through int u^2 phi_u (the
    integration-by-parts identity), never by differencing phi.
    """
    led = ledger(u, params, rule)
    val = 0.5 * A * led.a + 1.5 * B * led.b + 1.25 * C * led.c
    if params.power_term:
        val -= 3.0 * D / (params.p + 1.0) * led.d
    return val


def fiber_energy(led: IdentityLedger, p: float, t) -> np.ndarray:
    """I(t^2 u(t .)) from the ledger: a t^3/2 + b t/2 + c t^3/4 - d t^{2p-1}/(p+1)."""
    t = np.asarray(t, dtype=float)
    return (
        0.5 * led.a * t**3
        + 0.5 * led.b * t
        + 0.25 * led.c * t**3
        - led.d * t ** (2.0 * p - 1.0) / (p + 1.0)
    )


def fiber_constraint(led: IdentityLedger, p: float, t) -> np.ndarray:
    """G(t^2 u(t .)) from the ledger."""
    t = np.asarray(t, dtype=float)
    return (
        1.5 * led.a * t**3
        + 0.5 * led.b * t
        + 0.75 * led.c * t**3
        - (2.0 * p - 1.0) / (p + 1.0) * led.d * t ** (2.0 * p - 1.0)
    )
