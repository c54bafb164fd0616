"""Angle-averaged power nonlinearity.

The coupling between the two components enters only through averages over a
phase angle theta of powers of

    Q(a, b, theta) = a^2 + 2 a b cos(theta) + b^2 = |a + e^{i theta} b|^2 >= 0.

Three averages are needed: the density N_p (enters the energy), the force F_p
(enters the field equations) and the 2x2 Hessian kernel (enters the second
variation).  All are evaluated with the uniform periodic trapezoid rule, which
is spectrally accurate for these integrands away from |a| = |b| and still
convergent on that locus.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

DEFAULT_M = 256


class DegenerateHessianWarning(UserWarning):
    """The (.)^{-1} Hessian kernel hit its regularization floor somewhere."""


@dataclass(frozen=True, eq=False)
class AngularRule:
    """Uniform periodic trapezoid rule on [0, 2 pi): theta_k = 2 pi k / m."""

    m: int
    theta_nodes: np.ndarray = field(repr=False)
    cos_table: np.ndarray = field(repr=False)

    @property
    def weight(self) -> float:
        # equal weights summing to 2 pi
        return 2.0 * np.pi / self.m


def make_rule(m: int = DEFAULT_M) -> AngularRule:
    if m < 64 or m % 2:
        raise ValueError(f"angular rule needs even m >= 64, got {m}")
    theta = 2.0 * np.pi * np.arange(m) / m
    return AngularRule(m=m, theta_nodes=theta, cos_table=np.cos(theta))


def _q(a, b, cos_t):
    # written as (a + b c)^2 + b^2 (1 - c^2) it is >= 0, but the direct form
    # is cheaper; clip tiny negative round-off instead
    q = a * a + 2.0 * a * b * cos_t + b * b
    return np.maximum(q, 0.0)


def angular_density(a, b, p: float, rule: AngularRule):
    """N_p(a,b) = (1/2pi) int_0^{2pi} Q^{(p+1)/2} dtheta.

    Accepts scalars or equal-shape arrays for a, b (vectorized over nodes).
    """
    if not 0.0 < p <= 5.0:
        raise ValueError(f"p must be in (0, 5], got {p}")
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    q = _q(a, b, rule.cos_table)
    out = np.mean(q ** ((p + 1.0) / 2.0), axis=-1)
    return out if out.ndim else float(out)


def angular_force(a, b, p: float, rule: AngularRule):
    """F_p(a,b) = (1/2pi) int (a + b cos t) Q^{(p-1)/2} dt.

    First component of the coupling force; the second one is F_p(b,a).
    F_p(0,0) = 0 by continuous extension (p > 1).
    """
    if not 1.0 < p < 5.0:
        raise ValueError(f"p must be in (1, 5), got {p}")
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    q = _q(a, b, rule.cos_table)
    out = np.mean((a + b * rule.cos_table) * q ** ((p - 1.0) / 2.0), axis=-1)
    return out if out.ndim else float(out)


def angular_hessian_tables(a, b, p: float, rule: AngularRule, eps=None):
    """Entries (H11, H12, H22) of the theta-averaged 2x2 force Jacobian.

    H11 = <[1 + (p-1)(a + b c)^2 / Q] Q^{(p-1)/2}>, H22 likewise with a,b
    swapped inside the square, and H12 = <[c + (p-1)(b + a c)(a + b c)/Q]
    Q^{(p-1)/2}>.  The 1/Q factor is evaluated as 1/max(Q, eps^2); by default
    eps^2 = 1e-12 (a^2 + b^2), which only matters on the measure-zero locus
    where Q vanishes (a = +-b with cos t = -+1).

    Returns (H11, H12, H22, floored) where ``floored`` reports whether the
    floor was active anywhere.
    """
    if not 1.0 < p < 5.0:
        raise ValueError(f"p must be in (1, 5), got {p}")
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    c = rule.cos_table
    q = _q(a, b, c)
    if eps is None:
        eps2 = 1e-12 * (a * a + b * b)
    else:
        eps2 = np.broadcast_to(float(eps) ** 2, q.shape)
    # the absolute floor only guards 0/0 at a = b = 0, where the kernel is 0
    qsafe = np.maximum(np.maximum(q, eps2), 1e-300)
    floored = bool(np.any(q < eps2))
    qp = q ** ((p - 1.0) / 2.0)
    fa = a + b * c
    fb = b + a * c
    h11 = np.mean((1.0 + (p - 1.0) * fa * fa / qsafe) * qp, axis=-1)
    h22 = np.mean((1.0 + (p - 1.0) * fb * fb / qsafe) * qp, axis=-1)
    h12 = np.mean((c + (p - 1.0) * fa * fb / qsafe) * qp, axis=-1)
    return h11, h12, h22, floored


def angular_hessian(a: float, b: float, p: float, rule: AngularRule, eps=None):
    """Theta-averaged symmetric 2x2 Hessian kernel at one point (a, b).

    Warns with :class:`DegenerateHessianWarning` when the regularization
    floor was activated.
    """
    h11, h12, h22, floored = angular_hessian_tables(a, b, p, rule, eps=eps)
    if floored:
        warnings.warn(
            f"Hessian kernel floor active at (a, b) = ({a}, {b})",
            DegenerateHessianWarning,
            stacklevel=2,
        )
    return np.array([[float(h11), float(h12)], [float(h12), float(h22)]])


def cp_constant(p: float, rule: AngularRule) -> float:
    """c_p = (1/2pi) int |1 + e^{i theta}|^{p+1} dtheta = N_p(1, 1)."""
    return float(angular_density(1.0, 1.0, p, rule))
