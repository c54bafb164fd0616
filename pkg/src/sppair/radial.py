"""Radial grid, calculus and the Coulomb-type potential for radial densities.

Everything here works on functions of r = |x| sampled on a uniform grid over
[0, r_max], understood as radial profiles of functions on R^3.  Volume
integrals carry the 4*pi*r^2 measure, the Laplacian is the radial one
f'' + (2/r) f', and ``solve_poisson`` inverts -Delta phi = rho for a radial
density rho = u^2 (or a cross density u*v) with the physical far-field
behaviour phi ~ M/r built in:

    phi(r) = (1/r) * int_0^r s^2 rho(s) ds  +  int_r^inf s rho(s) ds.

Both pieces are cumulative integrals, so one evaluation costs O(n).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson


class GridConfigError(ValueError):
    """Raised for grid parameters outside the supported range."""


MIN_NODES = 16


def _simpson_coeffs(n: int) -> np.ndarray:
    """Composite Simpson coefficients (1,4,2,...,4,1)/3 for n odd nodes."""
    c = np.full(n, 2.0)
    c[1::2] = 4.0
    c[0] = c[-1] = 1.0
    return c / 3.0


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Uniform node set on [0, r_max] with volume-quadrature weights.

    Attributes
    ----------
    n : node count (odd, so composite Simpson pairs tile the interval)
    r_max : truncation radius
    nodes : r_i = i*h with h = r_max/(n-1)
    weights : w_i with sum_i w_i f(r_i) ~ int_0^r_max f(r) 4 pi r^2 dr
    """

    n: int
    r_max: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def h(self) -> float:
        return self.r_max / (self.n - 1)

    # Simpson weights for plain dr-integration, shared by the Poisson solve.
    @property
    def line_weights(self) -> np.ndarray:
        return _simpson_coeffs(self.n) * self.h


def make_grid(n: int, r_max: float) -> RadialGrid:
    """Build a uniform radial grid with composite-Simpson volume weights.

    ``n`` is rounded up to the next odd integer so Simpson pairs fit exactly.
    """
    if n < MIN_NODES:
        raise GridConfigError(f"need at least {MIN_NODES} nodes, got {n}")
    if not np.isfinite(r_max) or r_max <= 0:
        raise GridConfigError(f"r_max must be positive, got {r_max}")
    if n % 2 == 0:
        n += 1
    h = r_max / (n - 1)
    nodes = np.arange(n) * h
    nodes[-1] = r_max
    weights = 4.0 * np.pi * nodes**2 * _simpson_coeffs(n) * h
    return RadialGrid(n=n, r_max=float(r_max), nodes=nodes, weights=weights)


@dataclass(eq=False)
class RadialField:
    """One scalar radial profile sampled on a grid (plain values, not r-weighted)."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValueError(
                f"field has {self.values.shape} values for a {self.grid.n}-node grid"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    def copy(self) -> "RadialField":
        return RadialField(self.grid, self.values.copy())

    def to_csv(self) -> str:
        """Serialize as CSV with IEEE round-trip formatting."""
        buf = io.StringIO()
        buf.write("r,value\n")
        for r, v in zip(self.grid.nodes, self.values):
            buf.write(f"{r!r},{v!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, grid: RadialGrid | None = None) -> "RadialField":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        r = np.array([float(a) for a, _ in rows])
        v = np.array([float(b) for _, b in rows])
        if grid is None:
            grid = make_grid(len(r), float(r[-1]))
        return cls(grid, v)


@dataclass(eq=False)
class FieldPair:
    """The vector unknown (u1, u2), both components on one shared grid."""

    first: RadialField
    second: RadialField

    def __post_init__(self):
        if self.first.grid is not self.second.grid:
            raise ValueError("pair components must share one grid object")

    @property
    def grid(self) -> RadialGrid:
        return self.first.grid

    def copy(self) -> "FieldPair":
        return FieldPair(self.first.copy(), self.second.copy())


def zero_field(grid: RadialGrid) -> RadialField:
    return RadialField(grid, np.zeros(grid.n))


def field_from_callable(grid: RadialGrid, f) -> RadialField:
    return RadialField(grid, np.asarray(f(grid.nodes), dtype=float))


def volume_integral(f: RadialField) -> float:
    """int_0^r_max f(r) 4 pi r^2 dr by the grid's Simpson weights."""
    return float(np.dot(f.grid.weights, f.values))


def volume_integral_values(grid: RadialGrid, values: np.ndarray) -> float:
    return float(np.dot(grid.weights, values))


def laplacian_values(grid: RadialGrid, u: np.ndarray) -> np.ndarray:
    """Radial Laplacian u'' + (2/r) u' on raw values; see ``laplacian``."""
    n, h, r = grid.n, grid.h, grid.nodes
    out = np.empty(n)
    # interior
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2 + (u[2:] - u[:-2]) / (
        h * r[1:-1]
    )
    # r = 0: even extension gives Delta u(0) = 3 u''(0) = 6 (u(h) - u(0)) / h^2
    out[0] = 6.0 * (u[1] - u[0]) / h**2
    # r = r_max: Dirichlet ghost value 0 past the boundary
    out[-1] = (-2.0 * u[-1] + u[-2]) / h**2 + (0.0 - u[-2]) / (h * r[-1])
    return out


def laplacian(f: RadialField) -> RadialField:
    """Second-order radial Laplacian.

    Interior nodes use the centered stencil for f'' + (2/r) f'.  At r = 0 the
    regular limit of a radial C^2 function removes the 2/r singularity exactly
    and gives Delta f(0) = 6 (f(h) - f(0)) / h^2.  At r_max a Dirichlet ghost
    value 0 is assumed.
    """
    return RadialField(f.grid, laplacian_values(f.grid, f.values))


def poisson_values(grid: RadialGrid, density: np.ndarray) -> np.ndarray:
    """Potential of a radial density: phi with -Delta phi = density, phi ~ M/r.

    Uses two cumulative Simpson integrals,

        A(r) = int_0^r s^2 density(s) ds,   B(r) = int_0^r s density(s) ds,

    and phi(r) = A(r)/r + (B(inf) - B(r)); at r = 0 the limit is B(inf).
    """
    r = grid.nodes
    a = cumulative_simpson(r**2 * density, x=r, initial=0.0)
    b = cumulative_simpson(r * density, x=r, initial=0.0)
    phi = np.empty(grid.n)
    phi[1:] = a[1:] / r[1:] + (b[-1] - b[1:])
    phi[0] = b[-1]
    return phi


def poisson_cross(u: RadialField, v: RadialField) -> RadialField:
    """Potential of the cross density u*v (the derivative direction of u -> phi_u)."""
    if u.grid is not v.grid:
        raise ValueError("cross density needs a shared grid")
    return RadialField(u.grid, poisson_values(u.grid, u.values * v.values))


def solve_poisson(u: RadialField) -> RadialField:
    """Potential phi_u of the density u^2; identical to ``poisson_cross(u, u)``."""
    return poisson_cross(u, u)


def dirichlet_inner(grid: RadialGrid, u: np.ndarray, v: np.ndarray) -> float:
    """Volume-weighted pairing <u, -Delta v>; the discrete stand-in for
    int grad(u).grad(v) dV on Dirichlet-truncated fields."""
    return float(np.dot(grid.weights, u * (-laplacian_values(grid, v))))


def interpolate_to(f: RadialField, grid: RadialGrid) -> RadialField:
    """Cubic-spline resample onto another grid; beyond the source radius the
    field is taken to be 0 (decaying-tail convention)."""
    from scipy.interpolate import CubicSpline

    spl = CubicSpline(f.grid.nodes, f.values, bc_type=((1, 0.0), "not-a-knot"))
    vals = np.where(grid.nodes <= f.grid.r_max, spl(grid.nodes), 0.0)
    return RadialField(grid, vals)
