"""Coupled-system solvers for every parameter regime.

Strategy map (p is the power, mu the coupling matrix):

* ``newton_solve``              damped matrix-free Newton on the discretized
                                field equations; workhorse of everything else.
* ``minimize_on_manifold``      2 < p < 5: descent on the dilation manifold
                                G = 2J + P = 0 with fiber reprojection, then
                                Newton polish; seeds cover semitrivial and
                                vectorial shapes.
* ``global_minimize``           1 < p < 2, det(mu) > 0: preconditioned descent
                                to the (negative-energy) global minimizer.
* ``mountain_pass_continuation`` 1 < p < 2, small mu: start from the exact
                                coupled soliton (U, U) of the mu = 0 limit
                                problem and continue in s*mu up to s = 1.
* ``mu12_continuation``         1 < p <= 2, large cross coupling: bifurcate off
                                the attractive-Coulomb pair (V, V) and walk an
                                increasing mu12 schedule.
* ``classify_zero_potential``   power term off: closed-form classification by
                                the sign of det(mu), verified numerically.

The Newton linear systems are solved matrix-free: the banded local part
(Laplacian + diagonal couplings + the 2x2 angular blocks) preconditions an
iterative Krylov solve, with the dense Coulomb-derivative terms applied as
O(n) potential evaluations.  Inner tolerance is 1e-2 of the current residual
(inexact Newton), the line search halves the step until the residual norm
decreases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse.linalg import LinearOperator, lgmres

from .angular import AngularRule, angular_force, angular_hessian_tables, cp_constant, make_rule
from .functional import (
    FieldPair,
    IdentityLedger,
    ModelParams,
    energy,
    ledger,
    nehari_J,
    pohozaev_residual,
)
from .radial import RadialField, RadialGrid, laplacian_values, make_grid, poisson_values
from .scalar import (
    ScalarReport,
    constrain_last_row,
    hartree_ground,
    lap_band,
    scalar_fiber_root,
    single_ground,
)

CLASSIFICATIONS = (
    "trivial",
    "semitrivial_first",
    "semitrivial_second",
    "vectorial_positive",
    "vectorial_signchanging",
    "diverged",
)


@dataclass(frozen=True)
class SeedSpec:
    profile: str = "gaussian"  # gaussian | sech | file
    amplitude: float = 1.0
    width: float = 1.0
    path: str | None = None

    def build(self, grid: RadialGrid) -> np.ndarray:
        r = grid.nodes
        if self.profile == "gaussian":
            v = self.amplitude * np.exp(-(r**2) / (2.0 * self.width**2))
        elif self.profile == "sech":
            v = self.amplitude / np.cosh(r / self.width)
        elif self.profile == "file":
            from .radial import RadialField, interpolate_to, make_grid as _mk

            data = np.loadtxt(self.path, delimiter=",", skiprows=1)
            src = RadialField(_mk(len(data), float(data[-1, 0])), data[:, 1])
            v = interpolate_to(src, grid).values
        else:
            raise ValueError(f"unknown seed profile {self.profile!r}")
        v = v.copy()
        v[-1] = 0.0
        return v


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 500
    damping: float = 1.0
    continuation_steps: int = 16
    seed: SeedSpec = field(default_factory=SeedSpec)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class SolveReport:
    solution: FieldPair
    energy: float
    ledger: IdentityLedger
    residual_sup: float
    pohozaev_residual: float
    nehari_residual: float
    iterations: int
    classification: str
    ratio_stats: tuple | None
    trace: list = field(default_factory=list)
    seed_label: str = ""
    notes: str = ""

    @property
    def converged(self) -> bool:
        return self.classification != "diverged"


def classify_values(u1: np.ndarray, u2: np.ndarray, amp_floor: float = 1e-6) -> str:
    amp = max(np.max(np.abs(u1)), np.max(np.abs(u2)))
    if amp <= amp_floor:
        return "trivial"
    nz1 = np.max(np.abs(u1)) > 1e-5 * amp
    nz2 = np.max(np.abs(u2)) > 1e-5 * amp
    if nz1 and not nz2:
        return "semitrivial_first"
    if nz2 and not nz1:
        return "semitrivial_second"
    if min(np.min(u1), np.min(u2)) > -1e-10 * amp:
        return "vectorial_positive"
    return "vectorial_signchanging"


def ratio_stats(u1: np.ndarray, u2: np.ndarray) -> tuple | None:
    """(mean, max deviation from the mean) of u2/u1 over nodes with
    u1 > 1e-6 max(u1)."""
    m1 = np.max(u1)
    if m1 <= 0:
        return None
    mask = u1 > 1e-6 * m1
    if not np.any(mask):
        return None
    ratios = u2[mask] / u1[mask]
    mean = float(np.mean(ratios))
    return (mean, float(np.max(np.abs(ratios - mean))))


class _NewtonSystem:
    """Residual/Jacobian assembly for the coupled equations on one grid."""

    def __init__(self, grid: RadialGrid, params: ModelParams, rule: AngularRule):
        self.grid = grid
        self.params = params
        self.rule = rule
        self.lap = lap_band(grid)

    def masks_parts(self, u1, u2):
        if self.params.positive_part:
            m1 = (u1 > 0.0).astype(float)
            m2 = (u2 > 0.0).astype(float)
            return m1, m2, u1 * m1, u2 * m2
        one = np.ones_like(u1)
        return one, one, u1, u2

    def residual(self, u1, u2):
        pr = self.params
        m1, m2, v1, v2 = self.masks_parts(u1, u2)
        phi1 = poisson_values(self.grid, v1 * v1)
        phi2 = poisson_values(self.grid, v2 * v2)
        r1 = -laplacian_values(self.grid, u1) + pr.lam * u1
        r2 = -laplacian_values(self.grid, u2) + pr.lam * u2
        r1 += (pr.mu11 * phi1 - pr.mu12 * phi2) * v1
        r2 += (pr.mu22 * phi2 - pr.mu12 * phi1) * v2
        if pr.power_term:
            r1 -= m1 * angular_force(v1, v2, pr.p, self.rule)
            r2 -= m2 * angular_force(v2, v1, pr.p, self.rule)
        r1[-1] = u1[-1]  # Dirichlet constraint rows at r_max
        r2[-1] = u2[-1]
        return r1, r2, phi1, phi2

    def jacobian_pieces(self, u1, u2, phi1, phi2):
        """Per-iterate diagonal/cross tables and the banded factor."""
        pr = self.params
        m1, m2, v1, v2 = self.masks_parts(u1, u2)
        loc1 = (pr.mu11 * phi1 - pr.mu12 * phi2) * m1
        loc2 = (pr.mu22 * phi2 - pr.mu12 * phi1) * m2
        if pr.power_term:
            h11, h12, h22, _ = angular_hessian_tables(v1, v2, pr.p, self.rule)
            h11 = h11 * m1 * m1
            h12 = h12 * m1 * m2
            h22 = h22 * m2 * m2
        else:
            h11 = h12 = h22 = np.zeros(self.grid.n)
        d1 = pr.lam + loc1 - h11
        d2 = pr.lam + loc2 - h22
        band = self._banded(d1, d2, -h12)
        return (m1, m2, v1, v2, d1, d2, h12), band

    def matvec(self, pieces, psi1, psi2):
        pr = self.params
        m1, m2, v1, v2, d1, d2, h12 = pieces
        out1 = -laplacian_values(self.grid, psi1) + d1 * psi1 - h12 * psi2
        out2 = -laplacian_values(self.grid, psi2) + d2 * psi2 - h12 * psi1
        pc1 = poisson_values(self.grid, v1 * (m1 * psi1))
        pc2 = poisson_values(self.grid, v2 * (m2 * psi2))
        out1 += 2.0 * (pr.mu11 * pc1 - pr.mu12 * pc2) * v1
        out2 += 2.0 * (pr.mu22 * pc2 - pr.mu12 * pc1) * v2
        out1[-1] = psi1[-1]
        out2[-1] = psi2[-1]
        return out1, out2

    def _banded(self, d1, d2, cross):
        n = self.grid.n
        ab = np.zeros((5, 2 * n))
        lap = self.lap
        ab[2, 0::2] = lap[1] + d1
        ab[2, 1::2] = lap[1] + d2
        ab[1, 1::2] = cross
        ab[3, 0::2] = cross
        ab[0, 2::2] = lap[0, 1:]
        ab[0, 3::2] = lap[0, 1:]
        ab[4, 0:-2:2] = lap[2, :-1]
        ab[4, 1:-2:2] = lap[2, :-1]
        return constrain_last_row(ab)


def newton_solve(
    init: FieldPair,
    params: ModelParams,
    cfg: SolverConfig | None = None,
    rule: AngularRule | None = None,
    seed_label: str = "",
) -> SolveReport:
    """Damped Newton on the discretized field equations.

    Returns a report classified ``diverged`` after ``max_iter`` iterations or
    when the damping underflows 2^-20.
    """
    cfg = cfg or SolverConfig()
    rule = rule or make_rule()
    grid = init.grid
    sys = _NewtonSystem(grid, params, rule)
    n = grid.n
    u1 = init.first.values.copy()
    u2 = init.second.values.copy()
    u1[-1] = 0.0
    u2[-1] = 0.0

    trace = []
    diverged = False
    r1, r2, phi1, phi2 = sys.residual(u1, u2)
    rsup = max(np.max(np.abs(r1)), np.max(np.abs(r2)))
    rnorm = np.sqrt(np.linalg.norm(r1) ** 2 + np.linalg.norm(r2) ** 2)
    it = 0
    nu = 0.0  # Levenberg shift, activated only when plain Newton stalls
    nu_unit = params.lam
    while rsup > cfg.tol:
        if it >= cfg.max_iter:
            diverged = True
            break
        it += 1
        trace.append(float(rsup))
        pieces, band0 = sys.jacobian_pieces(u1, u2, phi1, phi2)
        rhs = np.empty(2 * n)
        rhs[0::2] = -r1
        rhs[1::2] = -r2

        while True:
            def matvec(x, nu=nu):
                o1, o2 = sys.matvec(pieces, x[0::2], x[1::2])
                out = np.empty_like(x)
                out[0::2] = o1
                out[1::2] = o2
                return out + nu * x

            band = band0 if nu == 0.0 else None
            if band is None:
                band = band0.copy()
                band[2] += nu
            def prec(x, band=band):
                return solve_banded((2, 2), band, x)

            op = LinearOperator((2 * n, 2 * n), matvec=matvec)
            mop = LinearOperator((2 * n, 2 * n), matvec=prec)
            delta, _ = lgmres(op, rhs, M=mop, rtol=1e-2, atol=0.0, maxiter=60)
            d1 = delta[0::2]
            d2 = delta[1::2]

            s = cfg.damping
            accepted = False
            while s >= 2.0**-20:
                t1 = u1 + s * d1
                t2 = u2 + s * d2
                t1[-1] = 0.0
                t2[-1] = 0.0
                n1, n2, p1t, p2t = sys.residual(t1, t2)
                nnorm = np.sqrt(np.linalg.norm(n1) ** 2 + np.linalg.norm(n2) ** 2)
                if nnorm < (1.0 - 1e-4 * s) * rnorm or nnorm <= cfg.tol:
                    u1, u2, r1, r2, phi1, phi2 = t1, t2, n1, n2, p1t, p2t
                    rnorm = nnorm
                    accepted = True
                    break
                s *= 0.5
            if accepted:
                nu *= 0.25
                if nu < 1e-10 * nu_unit:
                    nu = 0.0
                break
            # stalled: regularize the linear model and retry
            nu = max(16.0 * nu, 1e-3 * nu_unit)
            if nu > 1e7 * nu_unit:
                diverged = True
                break
        if diverged:
            break
        rsup = max(np.max(np.abs(r1)), np.max(np.abs(r2)))
    trace.append(float(rsup))

    return finish_report(
        grid, params, rule, u1, u2, it, trace, diverged, seed_label=seed_label
    )


def finish_report(
    grid, params, rule, u1, u2, iterations, trace, diverged, seed_label="", notes=""
) -> SolveReport:
    pair = FieldPair(RadialField(grid, u1), RadialField(grid, u2))
    led = ledger(pair, params, rule)
    sysm = _NewtonSystem(grid, params, rule)
    r1, r2, _, _ = sysm.residual(u1, u2)
    rsup = float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))
    cls = "diverged" if diverged else classify_values(u1, u2)
    return SolveReport(
        solution=pair,
        energy=energy(pair, params, rule),
        ledger=led,
        residual_sup=rsup,
        pohozaev_residual=pohozaev_residual(pair, params, rule=rule),
        nehari_residual=nehari_J(pair, params, rule),
        iterations=iterations,
        classification=cls,
        ratio_stats=ratio_stats(u1, u2),
        trace=trace,
        seed_label=seed_label,
        notes=notes,
    )


def fiber_root(led: IdentityLedger, p: float) -> float:
    """Unique t* > 0 with G(t^2 u(t .)) = 0, computed from the ledger."""
    if not 2.0 < p < 5.0:
        raise ValueError(f"fiber projection needs p in (2, 5), got {p}")
    return scalar_fiber_root(led.a, led.b, led.c, led.d, p)


def _rescale_pair(grid, u1, u2, t):
    from .scalar import _rescale_field

    return _rescale_field(grid, u1, t), _rescale_field(grid, u2, t)


def _precond_banded(grid, lam):
    band = lap_band(grid)
    band[1] += lam
    return constrain_last_row(band)


def minimize_on_manifold(
    params: ModelParams,
    cfg: SolverConfig | None = None,
    grid: RadialGrid | None = None,
    rule: AngularRule | None = None,
) -> SolveReport:
    """Ground state for 2 < p < 5 by constrained descent plus Newton polish.

    Each iterate is pulled back to the manifold G = 0 along the dilation
    fiber; descent directions are (-Delta + lam)^{-1}-preconditioned.  Seeds
    sweep semitrivial and vectorial Gaussian shapes (symmetrized to their
    absolute values); the lowest converged energy wins, ties break toward the
    earlier seed.
    """
    cfg = cfg or SolverConfig()
    rule = rule or make_rule()
    if grid is None:
        grid = default_grid(params)
    if not 2.0 < params.p < 5.0:
        raise ValueError("manifold minimization needs p in (2, 5)")

    w = grid.weights
    band = _precond_banded(grid, params.lam)
    sysm = _NewtonSystem(grid, params, rule)

    g = cfg.seed.build(grid)
    if np.max(np.abs(g)) <= 0:
        g = SeedSpec().build(grid)
    zero = np.zeros(grid.n)
    seeds = [
        ("first_only", g, zero),
        ("second_only", zero, g),
        ("equal", g, g),
        ("skew", g, 2.0 * g),
    ]

    def project(u1, u2):
        led = ledger(
            FieldPair(RadialField(grid, u1), RadialField(grid, u2)), params, rule
        )
        t = fiber_root(led, params.p)
        return _rescale_pair(grid, u1, u2, t)

    def descend(u1, u2):
        u1, u2 = project(u1, u2)
        pair = FieldPair(RadialField(grid, u1), RadialField(grid, u2))
        e = energy(pair, params, rule)
        step = 1.0
        for _ in range(120):
            r1, r2, _, _ = sysm.residual(u1, u2)
            d1 = -solve_banded((1, 1), band, r1)
            d2 = -solve_banded((1, 1), band, r2)
            slope = float(np.dot(w, r1 * d1) + np.dot(w, r2 * d2))
            s = step
            improved = False
            while s > 1e-8:
                t1, t2 = project(u1 + s * d1, u2 + s * d2)
                et = energy(
                    FieldPair(RadialField(grid, t1), RadialField(grid, t2)),
                    params,
                    rule,
                )
                if et < e + 1e-4 * s * min(slope, 0.0):
                    u1, u2, e = t1, t2, et
                    step = min(1.5 * s, 4.0)
                    improved = True
                    break
                s *= 0.5
            if not improved:
                break
        return u1, u2

    best = None
    for label, s1, s2 in seeds:
        # minimizers are unchanged under component-wise absolute value
        u1, u2 = np.abs(s1), np.abs(s2)
        try:
            u1, u2 = descend(u1, u2)
        except (RuntimeError, ValueError):
            continue
        rep = newton_solve(
            FieldPair(RadialField(grid, u1), RadialField(grid, u2)),
            params,
            cfg,
            rule,
            seed_label=label,
        )
        if rep.classification in ("diverged", "trivial"):
            continue
        if best is None or rep.energy < best.energy - 1e-9:
            best = rep
    if best is None:
        pair = FieldPair(RadialField(grid, zero), RadialField(grid, zero.copy()))
        return finish_report(
            grid, params, rule, zero, zero.copy(), 0, [], True, notes="all seeds failed"
        )
    return best


def global_minimize(
    params: ModelParams,
    cfg: SolverConfig | None = None,
    grid: RadialGrid | None = None,
    rule: AngularRule | None = None,
    seeds=None,
) -> SolveReport:
    """Unconstrained preconditioned gradient flow to the best local minimizer.

    Intended for 1 < p < 2 with det(mu) > 0 where the action is bounded below;
    with negative energy at the minimizer for small couplings.  A flow that
    collapses to zero is reported as ``trivial``.
    """
    cfg = cfg or SolverConfig()
    rule = rule or make_rule()
    if grid is None:
        grid = default_grid(params)
    w = grid.weights
    band = _precond_banded(grid, params.lam)
    sysm = _NewtonSystem(grid, params, rule)
    r = grid.nodes

    if seeds is None:
        seeds = []
        for amp in (1.0, 3.0, 8.0):
            for width in (2.0, 5.0):
                v = amp * np.exp(-(r**2) / (2.0 * width**2))
                v[-1] = 0.0
                seeds.append((f"gauss_a{amp:g}_w{width:g}", v, v.copy()))

    def flow(u1, u2):
        pair = FieldPair(RadialField(grid, u1), RadialField(grid, u2))
        e = energy(pair, params, rule)
        step = 1.0
        its = 0
        for its in range(1, 400):
            r1, r2, _, _ = sysm.residual(u1, u2)
            d1 = -solve_banded((1, 1), band, r1)
            d2 = -solve_banded((1, 1), band, r2)
            slope = float(np.dot(w, r1 * d1) + np.dot(w, r2 * d2))
            gnorm = max(np.max(np.abs(d1)), np.max(np.abs(d2)))
            amp = max(np.max(np.abs(u1)), np.max(np.abs(u2)), 1e-12)
            if gnorm <= 1e-9 * max(amp, 1.0):
                break
            s = step
            improved = False
            while s > 1e-10:
                t1 = u1 + s * d1
                t2 = u2 + s * d2
                t1[-1] = 0.0
                t2[-1] = 0.0
                et = energy(
                    FieldPair(RadialField(grid, t1), RadialField(grid, t2)),
                    params,
                    rule,
                )
                if et < e + 1e-4 * s * min(slope, 0.0):
                    u1, u2, e = t1, t2, et
                    step = min(1.5 * s, 8.0)
                    improved = True
                    break
                s *= 0.5
            if not improved:
                break
        return u1, u2, its

    best = None
    for label, s1, s2 in seeds:
        u1, u2, its = flow(s1.copy(), s2.copy())
        amp = max(np.max(np.abs(u1)), np.max(np.abs(u2)))
        if amp < 1e-6:
            rep = finish_report(
                grid, params, rule, u1, u2, its, [], False, seed_label=label,
                notes="flow collapsed to zero",
            )
        else:
            rep = newton_solve(
                FieldPair(RadialField(grid, u1), RadialField(grid, u2)),
                params,
                cfg,
                rule,
                seed_label=label,
            )
        if best is None:
            best = rep
            continue
        if rep.classification != "diverged" and (
            best.classification == "diverged" or rep.energy < best.energy - 1e-9
        ):
            best = rep
    return best


def mountain_pass_continuation(
    params: ModelParams,
    cfg: SolverConfig | None = None,
    grid: RadialGrid | None = None,
    rule: AngularRule | None = None,
) -> SolveReport:
    """Second (positive-energy) state for 1 < p < 2 and small couplings.

    The mu = 0 limit system is solved exactly by the pair (U, U) where
    -Delta U + lam U = (c_p/2) U^p; the coupling is then switched on along
    s*mu, s = delta, 2*delta, ..., 1 with a Newton solve at each step and
    automatic step halving (delta >= 2^-10) when a step loses the branch.
    """
    cfg = cfg or SolverConfig()
    rule = rule or make_rule()
    if grid is None:
        grid = default_grid(params)
    cp = cp_constant(params.p, rule)
    base = single_ground(params.lam, 0.0, params.p, 0.5 * cp, grid, tol=cfg.tol)
    if base.status != "converged":
        raise RuntimeError("limit-problem soliton failed to converge")
    u1 = base.field.values.copy()
    u2 = base.field.values.copy()

    s = 0.0
    delta = 1.0 / cfg.continuation_steps
    total_it = 0
    while s < 1.0 - 1e-12:
        s_try = min(1.0, s + delta)
        params_s = ModelParams(
            lam=params.lam,
            mu11=s_try * params.mu11,
            mu22=s_try * params.mu22,
            mu12=s_try * params.mu12,
            p=params.p,
            positive_part=params.positive_part,
            power_term=True,
        )
        rep = newton_solve(
            FieldPair(RadialField(grid, u1), RadialField(grid, u2)),
            params_s,
            cfg,
            rule,
        )
        total_it += rep.iterations
        if rep.classification in ("diverged", "trivial"):
            delta *= 0.5
            if delta < 2.0**-10:
                out = finish_report(
                    grid, params, rule, u1, u2, total_it, [], True,
                    notes=f"branch lost at s={s:.6f}",
                )
                return out
            continue
        u1 = rep.solution.first.values
        u2 = rep.solution.second.values
        s = s_try

    final = newton_solve(
        FieldPair(RadialField(grid, u1), RadialField(grid, u2)), params, cfg, rule,
        seed_label="mountain_pass",
    )
    final.iterations += total_it
    return final


def mu12_continuation(
    params: ModelParams,
    mu12_schedule,
    cfg: SolverConfig | None = None,
    grid: RadialGrid | None = None,
    rule: AngularRule | None = None,
) -> list[SolveReport]:
    """Positive branch for 1 < p <= 2 bifurcating from the attractive pair.

    In rescaled variables v = sqrt(mu12) u the system tends, as mu12 grows, to
    the decoupled attractive-Coulomb system solved by (V, V) with
    -Delta V + lam V - phi_V V = 0.  The first schedule entry is reached by an
    internal geometric descent from a very large mu12; afterwards each entry
    seeds the next.  Reports are in the original variables.
    """
    cfg = cfg or SolverConfig()
    rule = rule or make_rule()
    if grid is None:
        grid = default_grid(params)
    schedule = list(mu12_schedule)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("mu12 schedule must be strictly increasing")

    v_rep = hartree_ground(params.lam, -1.0, grid, tol=cfg.tol)
    if v_rep.status != "converged":
        raise RuntimeError("attractive-Coulomb profile failed to converge")
    v = v_rep.field.values

    def solve_at(mu12, u1, u2):
        pr = ModelParams(
            lam=params.lam,
            mu11=params.mu11,
            mu22=params.mu22,
            mu12=mu12,
            p=params.p,
            positive_part=params.positive_part,
            power_term=True,
        )
        return newton_solve(
            FieldPair(RadialField(grid, u1), RadialField(grid, u2)), pr, cfg, rule,
            seed_label=f"mu12={mu12:g}",
        )

    # approach the first entry from the perturbative end
    first = schedule[0]
    path = [first]
    while path[-1] < 65536.0 * first:
        path.append(path[-1] * 4.0)
    u1 = u2 = None
    for mu12 in reversed(path):
        seed = v / np.sqrt(mu12)
        if u1 is None:
            u1, u2 = seed, seed.copy()
        rep = solve_at(mu12, u1, u2)
        if rep.classification in ("diverged", "trivial"):
            u1, u2 = seed, seed.copy()
            rep = solve_at(mu12, u1, u2)
        if rep.classification in ("diverged", "trivial"):
            raise RuntimeError(f"branch lost approaching mu12={mu12}")
        u1 = rep.solution.first.values
        u2 = rep.solution.second.values

    reports = []
    for mu12 in schedule:
        rep = solve_at(mu12, u1, u2)
        if rep.classification in ("diverged", "trivial"):
            rep.notes = f"branch lost at mu12={mu12}"
            reports.append(rep)
            break
        u1 = rep.solution.first.values
        u2 = rep.solution.second.values
        reports.append(rep)
    return reports


def classify_zero_potential(
    params: ModelParams,
    cfg: SolverConfig | None = None,
    grid: RadialGrid | None = None,
) -> SolveReport:
    """Zero-power-term classification by the sign of det(mu).

    det(mu) >= 0: verifies that descent from several seeds collapses and
    returns the trivial report.  det(mu) < 0: builds the closed-form state
    (V, a0 V) with V the attractive-Coulomb profile at coefficient
    det(mu)/(mu22 + mu12), Newton-verifies it, and returns it.
    """
    cfg = cfg or SolverConfig()
    if grid is None:
        grid = default_grid(params)
    pr = ModelParams(
        lam=params.lam,
        mu11=params.mu11,
        mu22=params.mu22,
        mu12=params.mu12,
        p=params.p,
        positive_part=False,
        power_term=False,
    )
    rule = make_rule()
    if pr.det_mu() >= 0.0:
        # no nontrivial states exist; confirm the flow collapses
        sysm = _NewtonSystem(grid, pr, rule)
        band = _precond_banded(grid, pr.lam)
        r = grid.nodes
        collapsed = True
        for amp, width in ((1.0, 1.0), (2.0, 3.0)):
            u1 = amp * np.exp(-(r**2) / (2 * width**2))
            u1[-1] = 0.0
            u2 = u1.copy()
            e = energy(
                FieldPair(RadialField(grid, u1), RadialField(grid, u2)), pr, rule
            )
            for _ in range(300):
                r1, r2, _, _ = sysm.residual(u1, u2)
                d1 = -solve_banded((1, 1), band, r1)
                d2 = -solve_banded((1, 1), band, r2)
                s = 1.0
                while s > 1e-12:
                    t1, t2 = u1 + s * d1, u2 + s * d2
                    et = energy(
                        FieldPair(RadialField(grid, t1), RadialField(grid, t2)),
                        pr,
                        rule,
                    )
                    if et < e:
                        u1, u2, e = t1, t2, et
                        break
                    s *= 0.5
                if np.max(np.abs(u1)) < 1e-8:
                    break
            collapsed = collapsed and np.max(np.abs(u1)) < 1e-6
        zero = np.zeros(grid.n)
        notes = "det(mu) >= 0: every seed collapsed" if collapsed else (
            "det(mu) >= 0 but a seed failed to collapse"
        )
        return finish_report(grid, pr, rule, zero, zero.copy(), 0, [], False, notes=notes)

    coef = pr.det_mu() / (pr.mu22 + pr.mu12)
    v_rep = hartree_ground(pr.lam, coef, grid, tol=cfg.tol)
    a0 = pr.a0()
    rep = newton_solve(
        FieldPair(
            RadialField(grid, v_rep.field.values.copy()),
            RadialField(grid, a0 * v_rep.field.values),
        ),
        pr,
        cfg,
        rule=rule,
        seed_label="(V, a0 V)",
    )
    rep.notes = f"det(mu) < 0: coefficient {coef:.6g}, a0 = {a0:.6g}"
    return rep


def default_grid(params: ModelParams, n: int = 2049, factor: float = 20.0) -> RadialGrid:
    """Default discretization: r_max = factor / sqrt(lam) resolves the tail of
    the slowest exponential decay rate."""
    return make_grid(n, factor / np.sqrt(params.lam))
