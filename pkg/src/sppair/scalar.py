"""Ground states of the scalar building-block equations.

Two families are needed by the coupled solvers and the audits:

* the power-coupled equation  -Delta u + a u + b phi_u u = c |u|^{p-1} u,
  solved by ``single_ground`` (fiber-projected descent for p > 2 with b >= 0,
  continuation from the b = 0 soliton otherwise, Newton polish always);

* the attractive Coulomb equation  -Delta u + lam u + mu phi_u u = 0 with
  mu < 0, solved by ``hartree_ground`` (self-consistent amplitude/eigenpair
  iteration plus Newton polish).  One master profile at (lam, mu) = (1, -1)
  is cached per grid; everything else is an exact rescaling of it,
  u(x) = (lam/sqrt(|mu|)) u_*(sqrt(lam) x).

All Newton steps run on the collocation operator with a banded direct solve
for the local part and an iterative correction for the dense Coulomb-derivative
part, so one iteration costs O(n) plus a few potential evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded
from scipy.sparse.linalg import LinearOperator, lgmres

from .radial import RadialField, RadialGrid, laplacian_values, make_grid, poisson_values


@dataclass
class ScalarReport:
    """Outcome of one scalar ground-state solve."""

    field: RadialField
    energy: float
    residual_sup: float
    iterations: int
    status: str  # converged | diverged | nonexistence_suspected


def lap_band(grid: RadialGrid) -> np.ndarray:
    """Banded (l=u=1) storage of -Delta_h, collocation form with the regular
    r = 0 row and the Dirichlet ghost at r_max."""
    n, h = grid.n, grid.h
    ab = np.zeros((3, n))
    i = np.arange(1, n - 1, dtype=float)
    ab[1, 1:-1] = 2.0 / h**2
    ab[0, 2:] = -(1.0 + 1.0 / i) / h**2       # super-diagonal entries of rows 1..n-2
    ab[2, 0:-2] = -(1.0 - 1.0 / i) / h**2     # sub-diagonal entries
    ab[1, 0] = 6.0 / h**2
    ab[0, 1] = -6.0 / h**2
    ab[1, -1] = 2.0 / h**2
    ab[2, -2] = -(1.0 - 1.0 / (n - 1.0)) / h**2
    return ab


def constrain_last_row(band: np.ndarray) -> np.ndarray:
    """Replace the r_max collocation row by the Dirichlet constraint u = 0.

    Solutions of the truncated problem carry an exact zero at the boundary
    node, so the field equation is posed on the rows 0..n-2 and the last row
    pins the boundary value; works on (1,1)- and (2,2)-banded storage, where
    the (2,2) layout interleaves the two components.
    """
    if band.shape[0] == 3:
        band[1, -1] = 1.0
        band[2, -2] = 0.0
    elif band.shape[0] == 5:
        band[2, -2:] = 1.0
        band[1, -1] = 0.0
        band[3, -2] = 0.0
        band[4, -4:-2] = 0.0
    else:
        raise ValueError("unsupported band width")
    return band


def _apply_band(ab: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = ab[1] * x
    out[:-1] += ab[0, 1:] * x[1:]
    out[1:] += ab[2, :-1] * x[:-1]
    return out


def scalar_residual(grid, u, a, b, c, p, phi=None):
    if phi is None:
        phi = poisson_values(grid, u * u)
    r = -laplacian_values(grid, u) + a * u + b * phi * u
    if c != 0.0:
        r -= c * np.abs(u) ** (p - 1.0) * u
    r[-1] = u[-1]  # Dirichlet constraint row at r_max
    return r, phi


def scalar_newton(grid, u0, a, b, c, p, tol=1e-10, max_iter=60):
    """Damped Newton for -Delta u + a u + b phi_u u = c |u|^{p-1} u.

    The Jacobian direction psi -> 2 b P(u psi) u is applied matrix-free inside
    lgmres; the banded local part preconditions the solve.
    """
    u = u0.copy()
    u[-1] = 0.0
    lap = lap_band(grid)
    res, phi = scalar_residual(grid, u, a, b, c, p)
    rnorm = np.linalg.norm(res)
    for it in range(1, max_iter + 1):
        if np.max(np.abs(res)) <= tol:
            return u, it - 1, float(np.max(np.abs(res))), True
        diag = a + b * phi - c * p * np.abs(u) ** (p - 1.0)
        band = lap.copy()
        band[1] += diag
        constrain_last_row(band)

        def matvec(psi, u=u, diag=diag, b=b):
            out = _apply_band(lap, psi) + diag * psi
            if b != 0.0:
                out += 2.0 * b * poisson_values(grid, u * psi) * u
            out[-1] = psi[-1]
            return out

        def prec(x, band=band):
            return solve_banded((1, 1), band, x)

        op = LinearOperator((grid.n, grid.n), matvec=matvec)
        mop = LinearOperator((grid.n, grid.n), matvec=prec)
        delta, _ = lgmres(op, -res, M=mop, rtol=1e-2, atol=0.0, maxiter=50)

        s = 1.0
        while s >= 2.0**-20:
            trial = u + s * delta
            res_t, phi_t = scalar_residual(grid, trial, a, b, c, p)
            if np.linalg.norm(res_t) < (1.0 - 0.25 * s) * rnorm:
                u, res, phi = trial, res_t, phi_t
                rnorm = np.linalg.norm(res)
                break
            s *= 0.5
        else:
            return u, it, float(np.max(np.abs(res))), False
    return u, max_iter, float(np.max(np.abs(res))), np.max(np.abs(res)) <= tol


def nls_soliton(grid: RadialGrid, lam: float, c: float, p: float, tol=1e-10):
    """Positive radial ground state of -Delta u + lam u = c u^p.

    Spectral-renormalization fixed point followed by Newton polish: with
    L = -Delta + lam and N(u) = c u^p, iterate u <- m^{p/(p-1)} L^{-1} N(u)
    where m = <L u, u> / <N(u), u> in the volume-weighted pairing.
    """
    w = grid.weights
    lap = lap_band(grid)
    band = lap.copy()
    band[1] += lam
    constrain_last_row(band)
    r = grid.nodes
    u = (2.0 * lam / c) ** (1.0 / (p - 1.0)) * np.exp(-0.5 * lam * r**2)
    u[-1] = 0.0
    gamma = p / (p - 1.0)
    for _ in range(400):
        nl = c * np.abs(u) ** (p - 1.0) * u
        lu = _apply_band(lap, u) + lam * u
        m = np.dot(w, u * lu) / np.dot(w, u * nl)
        unew = m**gamma * solve_banded((1, 1), band, nl)
        unew[-1] = 0.0
        if np.max(np.abs(unew - u)) <= 1e-12 * np.max(np.abs(unew)):
            u = unew
            break
        u = unew
    u, its, rsup, ok = scalar_newton(grid, u, lam, 0.0, c, p, tol=tol)
    if not ok:
        raise RuntimeError("soliton Newton polish failed")
    return u


def scalar_ledger(grid, u, a_coef, b_coef, c_coef, p):
    """Single-field ledger (a, b, c, d) for the weighted scalar action."""
    w = grid.weights
    a = float(np.dot(w, u * (-laplacian_values(grid, u))))
    b = a_coef * float(np.dot(w, u * u))
    phi = poisson_values(grid, u * u)
    c = b_coef * float(np.dot(w, u * u * phi))
    d = c_coef * float(np.dot(w, np.abs(u) ** (p + 1.0)))
    return a, b, c, d


def scalar_energy(grid, u, a_coef, b_coef, c_coef, p):
    a, b, c, d = scalar_ledger(grid, u, a_coef, b_coef, c_coef, p)
    return 0.5 * (a + b) + 0.25 * c - d / (p + 1.0)


def scalar_fiber_root(a, b, c, d, p):
    """Unique t* > 0 with G(t^2 u(t .)) = 0 for the scalar ledger."""
    from scipy.optimize import brentq

    if d <= 0.0:
        raise ValueError("fiber projection needs a positive power term (d > 0)")
    alpha = 1.5 * a + 0.75 * c
    beta = 0.5 * b
    delta = (2.0 * p - 1.0) / (p + 1.0) * d

    def g(t):
        return alpha * t**2 + beta - delta * t ** (2.0 * p - 2.0)

    hi = 1.0
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("fiber root bracket failed")
    lo = hi / 2.0
    while g(lo) < 0.0:
        lo /= 2.0
        if lo < 1e-12:
            raise RuntimeError("fiber root bracket failed")
    return brentq(g, lo, hi, xtol=1e-14, rtol=1e-15)


def _rescale_field(grid, u, t):
    """t^2 u(t r) on the same grid (cubic interpolation, 0 past r_max)."""
    from scipy.interpolate import CubicSpline

    spl = CubicSpline(grid.nodes, u, bc_type=((1, 0.0), "not-a-knot"))
    rt = t * grid.nodes
    vals = t**2 * np.where(rt <= grid.r_max, spl(rt), 0.0)
    vals[-1] = 0.0
    return vals


def _manifold_descent(grid, a_coef, b_coef, c_coef, p, u0, max_outer=200):
    """Minimize the scalar action restricted to the dilation manifold G = 0."""
    band = lap_band(grid)
    band[1] += a_coef
    constrain_last_row(band)
    w = grid.weights

    def project(u):
        a, b, c, d = scalar_ledger(grid, u, a_coef, b_coef, c_coef, p)
        t = scalar_fiber_root(a, b, c, d, p)
        return _rescale_field(grid, u, t)

    u = project(u0)
    e = scalar_energy(grid, u, a_coef, b_coef, c_coef, p)
    step = 1.0
    for _ in range(max_outer):
        res, _ = scalar_residual(grid, u, a_coef, b_coef, c_coef, p)
        d = -solve_banded((1, 1), band, res)
        slope = np.dot(w, res * d)
        if abs(slope) <= 1e-14 * max(abs(e), 1.0):
            break
        accepted = False
        s = step
        while s > 1e-8:
            trial = project(u + s * d)
            et = scalar_energy(grid, trial, a_coef, b_coef, c_coef, p)
            if et < e + 1e-4 * s * slope:
                u, e = trial, et
                step = min(s * 1.5, 4.0)
                accepted = True
                break
            s *= 0.5
        if not accepted:
            break
    return u


def single_ground(
    lam: float,
    mu: float,
    p: float,
    c: float,
    grid: RadialGrid,
    tol: float = 1e-8,
    continuation_steps: int = 8,
) -> ScalarReport:
    """Positive radial ground state of -Delta u + lam u + mu phi_u u = c |u|^{p-1} u.

    For p > 2 with mu >= 0 the state is found by descent on the dilation
    manifold; otherwise by continuation in mu from the mu = 0 soliton.  In the
    p <= 2 regime with large mu the continuation can lose the branch (no
    nontrivial state survives); that is reported as ``nonexistence_suspected``.
    """
    if not 1.0 < p < 5.0:
        raise ValueError(f"p must be in (1, 5), got {p}")
    if c <= 0.0:
        raise ValueError("power coefficient must be positive")

    if p > 2.0 and mu >= 0.0:
        seed = nls_soliton(grid, lam, c, p, tol=min(1e-8, tol))
        u = _manifold_descent(grid, lam, mu, c, p, seed)
        u, its, rsup, ok = scalar_newton(grid, u, lam, mu, c, p, tol=tol)
        status = "converged" if ok else "diverged"
    else:
        u = nls_soliton(grid, lam, c, p, tol=min(1e-8, tol))
        its = 0
        ok = True
        last_good = 0.0
        for k in range(1, continuation_steps + 1):
            s = mu * k / continuation_steps
            u_try, it_k, rsup, ok = scalar_newton(grid, u, lam, s, c, p, tol=tol)
            its += it_k
            if not ok or np.max(np.abs(u_try)) < 1e-8:
                status = "nonexistence_suspected" if p <= 2.0 and mu > 0 else "diverged"
                rep = ScalarReport(
                    RadialField(grid, u),
                    scalar_energy(grid, u, lam, last_good, c, p),
                    float(rsup),
                    its,
                    status,
                )
                return rep
            u = u_try
            last_good = s
        status = "converged"
        rsup = float(np.max(np.abs(scalar_residual(grid, u, lam, mu, c, p)[0])))

    return ScalarReport(
        RadialField(grid, u),
        scalar_energy(grid, u, lam, mu, c, p),
        float(rsup),
        its,
        status,
    )


# cache of the master attractive-Coulomb profile per (n, r_max)
_HARTREE_MASTER: dict = {}


def _sym_tridiag(sub, diag, sup):
    """Similarity-symmetrized (diag, offdiag) of a sign-consistent tridiagonal."""
    off = np.sqrt(sub * sup)
    return diag, off


def _hartree_master(grid: RadialGrid, tol=1e-10):
    """Ground state of -Delta u + u - phi_u u = 0 via amplitude-matched
    eigenpair iteration, then Newton polish."""
    key = (grid.n, round(grid.r_max, 12))
    if key in _HARTREE_MASTER:
        return _HARTREE_MASTER[key]

    n, h = grid.n, grid.h
    r = grid.nodes
    # v = r u turns the interior radial operator into the plain second
    # difference, a symmetric tridiagonal; the r = 0 value is slaved
    diag0 = np.full(n - 2, 2.0 / h**2)
    off = np.full(n - 3, -1.0 / h**2)

    shape = np.exp(-0.5 * r**2)
    t = 2.0
    for _ in range(80):
        phi_shape = poisson_values(grid, shape * shape)

        def lowest(tval, eigvals_only=True):
            dvals = diag0 - (tval**2) * phi_shape[1:-1]
            return eigh_tridiagonal(
                dvals, off, select="i", select_range=(0, 0), eigvals_only=eigvals_only
            )

        # amplitude t at which the lowest eigenvalue equals -1 (it decreases in t)
        lo, hi = t / 8.0, t * 8.0
        while lowest(hi)[0] > -1.0:
            hi *= 2.0
        while lowest(lo)[0] < -1.0:
            lo /= 2.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if lowest(mid)[0] > -1.0:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)

        _, evecs = lowest(t, eigvals_only=False)
        vec = evecs[:, 0]
        vec *= np.sign(vec[np.argmax(np.abs(vec))])
        new_shape = np.zeros(n)
        new_shape[1:-1] = vec / r[1:-1]
        new_shape[0] = (4.0 * new_shape[1] - new_shape[2]) / 3.0
        new_shape /= np.max(np.abs(new_shape))
        delta = np.max(np.abs(new_shape - shape))
        shape = new_shape
        if delta < 1e-10:
            break

    u = t * shape
    u, _, rsup, ok = scalar_newton(grid, u, 1.0, -1.0, 0.0, 3.0, tol=tol)
    if not ok:
        raise RuntimeError("attractive-Coulomb master solve failed")
    _HARTREE_MASTER[key] = u
    return u


def hartree_ground(
    lam: float, mu: float, grid: RadialGrid, tol: float = 1e-8
) -> ScalarReport:
    """Positive radial solution of -Delta u + lam u + mu phi_u u = 0, mu < 0.

    Obtained from the master (lam, mu) = (1, -1) profile by the exact scaling
    u(x) = (lam/sqrt(|mu|)) u_*(sqrt(lam) x), then Newton-polished on the
    target grid.
    """
    if mu >= 0.0:
        raise ValueError("the attractive-Coulomb state needs mu < 0")
    sigma = np.sqrt(lam)
    # master nodes R_i = sigma r_i land exactly on the target nodes after the
    # 1/sigma dilation, so the rescaling is a pure amplitude factor
    master_grid = make_grid(grid.n, grid.r_max * sigma)
    master = _hartree_master(master_grid)
    seed = (lam / np.sqrt(-mu)) * master
    u, its, rsup, ok = scalar_newton(grid, seed, lam, mu, 0.0, 3.0, tol=tol)
    status = "converged" if ok else "diverged"
    energy = scalar_energy(grid, u, lam, mu, 0.0, 3.0)
    return ScalarReport(RadialField(grid, u), energy, float(rsup), its, status)
