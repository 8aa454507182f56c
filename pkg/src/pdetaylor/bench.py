"""Accuracy metrics, point sampling, benchmark runs and a reference solver.

The benchmark compares the series expansion against closed-form solutions
where they exist (heat, diffusion, wave) using a normalised error

    nrmse(y, y~) = (1/N) * ||y - y~||_2 / (max(y) - min(y) + 1),

the 1/N prefactor and the +1 range regulariser both included deliberately so
reported numbers are comparable across problems and orders.

For problems with no closed form, :func:`reference_solve` provides a
method-of-lines oracle: fourth-order centred finite differences in space on a
fine grid, classical Runge-Kutta in time with a conservatively small step,
cubic-spline interpolation onto the query points.  It is built exclusively on
the plain-array evaluators of a problem, never on the series machinery it is
used to check, and is only trusted over short horizons (t <= 0.1).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .driver import compute_expansion
from .problems import NoExactOracleError, PdeProblem


class SamplingError(RuntimeError):
    """Could not draw enough admissible sample points."""


class OracleFailure(RuntimeError):
    """Reference solve went non-finite; its output must not be trusted."""


# Acceptance bounds for the exact-oracle problems, applied to component 0.
# Derivative and coefficient bounds hold per expansion order; evaluation
# bounds hold per horizon t1.
TABLE1_BOUNDS = {
    "heat": {"derivative_max": 1e-14},
    "wave": {"even_derivative_max": 1e-14, "odd_derivative_exact_zero": True},
    "diffusion": {
        "coefficient_max": 1e-12,
        "derivative_order10_range": (1e-9, 1e-5),
    },
}
TABLE2_BOUNDS = {
    "heat": {0.01: 1e-14, 0.05: 1e-13, 0.1: 1e-11},
    "diffusion": {0.01: 1e-15, 0.05: 1e-15, 0.1: 1e-15},
    "wave": {0.01: 1e-14, 0.05: 1e-14, 0.1: 1e-13},
}


def nrmse(y_true, y_approx) -> float:
    """Range-regularised, size-normalised root-mean-square error (see module docs)."""
    yt = np.asarray(y_true, dtype=np.float64).ravel()
    ya = np.asarray(y_approx, dtype=np.float64).ravel()
    if yt.size == 0 or yt.shape != ya.shape:
        raise ValueError(f"need equal-length non-empty vectors, got {yt.size} and {ya.size}")
    spread = float(yt.max() - yt.min()) + 1.0
    return float(np.linalg.norm(yt - ya)) / spread / yt.size


def _probe_grid(problem: PdeProblem, n: int = 4097) -> np.ndarray:
    lo, hi = problem.domain
    return np.linspace(lo, hi, n)


def _active_components(problem: PdeProblem) -> list[int]:
    """Components whose initial condition is not identically zero."""
    g = problem.ic_numpy(_probe_grid(problem))
    return [m for m, gm in enumerate(g) if float(np.abs(gm).max()) > 1e-12]


def default_exclusion(problem: PdeProblem, fraction: float = 0.1) -> float:
    """Default sampling threshold: a fraction of the largest initial amplitude."""
    g = problem.ic_numpy(_probe_grid(problem))
    gmax = max(float(np.abs(gm).max()) for gm in g)
    return fraction * gmax


def sample_points(problem: PdeProblem, count: int, tau: float, seed: int) -> np.ndarray:
    """Draw points uniformly inside the domain, skipping small-amplitude regions.

    A draw is kept when every non-trivial component of the initial condition
    exceeds ``tau`` in magnitude there (with ``tau = 0`` the filter is off and
    this is a plain uniform sample).  Draws are capped at ten times ``count``;
    a threshold leaving too little of the domain raises :class:`SamplingError`.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if tau < 0:
        raise ValueError("exclusion threshold must be >= 0")
    gmax = max(
        float(np.abs(problem.ic_numpy(_probe_grid(problem))[m]).max())
        for m in range(problem.components)
    )
    if tau >= gmax:
        raise ValueError(
            f"exclusion threshold {tau} is not below the largest initial amplitude {gmax}"
        )
    lo, hi = problem.domain
    rng = np.random.default_rng(seed)
    if tau == 0.0:
        return rng.uniform(lo, hi, size=count)
    active = _active_components(problem)
    kept: list[np.ndarray] = []
    total = 0
    n_kept = 0
    while n_kept < count and total < 10 * count:
        draw = rng.uniform(lo, hi, size=count)
        total += count
        g = problem.ic_numpy(draw)
        mask = np.ones(count, dtype=bool)
        for m in active:
            mask &= np.abs(g[m]) > tau
        kept.append(draw[mask])
        n_kept += int(mask.sum())
    if n_kept < count:
        raise SamplingError(
            f"only {n_kept} of {count} requested points admissible after {total} draws; "
            f"lower the exclusion threshold (currently {tau})"
        )
    return np.concatenate(kept)[:count]


@dataclass(frozen=True)
class BenchReport:
    """Accuracy summary of one expansion run against the closed-form oracle.

    NRMSE lists are indexed ``[component][order]``; evaluation errors are
    ``[component][horizon]`` aligned with ``t1_values``.
    """

    problem: str
    max_order: int
    seed: int
    tau: float
    points: np.ndarray
    t1_values: tuple[float, ...]
    derivative_nrmse: tuple[tuple[float, ...], ...]
    coefficient_nrmse: tuple[tuple[float, ...], ...]
    taylor_nrmse: tuple[tuple[float, ...], ...]
    runtime_seconds: float


def run_benchmark(
    problem: PdeProblem,
    max_order: int = 10,
    num_points: int = 50,
    t1_values=(0.01, 0.05, 0.1),
    seed: int = 0,
    tau: float | None = None,
) -> BenchReport:
    """Expand at sampled points and score derivatives, coefficients and values.

    Requires a problem with closed-form solution and derivatives.
    """
    if not problem.has_exact_oracle:
        raise NoExactOracleError(
            f"problem {problem.name!r} has no closed-form oracle to benchmark against"
        )
    start = time.perf_counter()
    if tau is None:
        tau = default_exclusion(problem)
    x = sample_points(problem, num_points, tau, seed)
    expansion = compute_expansion(problem, x, max_order)
    derivs = expansion.derivatives()

    d_rows, c_rows = [], []
    for m in range(problem.components):
        d_row, c_row = [], []
        for i in range(max_order + 1):
            truth = problem.exact_derivative(i, 0.0, x)[m]
            d_row.append(nrmse(truth, derivs[m][i]))
            c_row.append(nrmse(truth / math.factorial(i), expansion.coeffs[m][i]))
        d_rows.append(tuple(d_row))
        c_rows.append(tuple(c_row))

    t_rows = [[] for _ in range(problem.components)]
    for t1 in t1_values:
        approx = expansion.evaluate(t1)
        truth = problem.exact(t1, x)
        for m in range(problem.components):
            t_rows[m].append(nrmse(truth[m], approx[m]))

    return BenchReport(
        problem=problem.name,
        max_order=max_order,
        seed=seed,
        tau=float(tau),
        points=x,
        t1_values=tuple(float(t) for t in t1_values),
        derivative_nrmse=tuple(d_rows),
        coefficient_nrmse=tuple(c_rows),
        taylor_nrmse=tuple(tuple(r) for r in t_rows),
        runtime_seconds=time.perf_counter() - start,
    )


def check_thresholds(report: BenchReport) -> list[str]:
    """Compare a report against the published accuracy bounds (component 0).

    Returns a list of human-readable failures; empty means every bound holds.
    Bounds are only applied where they are defined: the diffusion
    derivative-degradation window needs order 10 in the run, and evaluation
    bounds apply to whichever of the standard horizons were requested.
    """
    failures: list[str] = []
    t1_bounds = TABLE2_BOUNDS.get(report.problem, {})
    bounds = TABLE1_BOUNDS.get(report.problem, {})
    deriv = report.derivative_nrmse[0]
    coeff = report.coefficient_nrmse[0]

    if "derivative_max" in bounds:
        cap = bounds["derivative_max"]
        for i in range(1, report.max_order + 1):
            if deriv[i] > cap:
                failures.append(
                    f"{report.problem} derivative order {i}: nrmse {deriv[i]:.3e} exceeds {cap:.0e}"
                )
    if "even_derivative_max" in bounds:
        cap = bounds["even_derivative_max"]
        for i in range(0, report.max_order + 1, 2):
            if deriv[i] > cap:
                failures.append(
                    f"{report.problem} derivative order {i}: nrmse {deriv[i]:.3e} exceeds {cap:.0e}"
                )
    if bounds.get("odd_derivative_exact_zero"):
        for i in range(1, report.max_order + 1, 2):
            if deriv[i] != 0.0:
                failures.append(
                    f"{report.problem} derivative order {i}: nrmse {deriv[i]:.3e}, expected exactly 0"
                )
    if "coefficient_max" in bounds:
        cap = bounds["coefficient_max"]
        for i in range(report.max_order + 1):
            if coeff[i] > cap:
                failures.append(
                    f"{report.problem} coefficient order {i}: nrmse {coeff[i]:.3e} exceeds {cap:.0e}"
                )
    if "derivative_order10_range" in bounds and report.max_order >= 10:
        lo, hi = bounds["derivative_order10_range"]
        if not (lo <= deriv[10] <= hi):
            failures.append(
                f"{report.problem} derivative order 10: nrmse {deriv[10]:.3e} "
                f"outside the degradation window [{lo:.0e}, {hi:.0e}]"
            )
    for j, t1 in enumerate(report.t1_values):
        cap = next((v for k, v in t1_bounds.items() if abs(k - t1) <= 1e-12), None)
        if cap is not None and report.taylor_nrmse[0][j] > cap:
            failures.append(
                f"{report.problem} evaluation at t1={t1:g}: nrmse "
                f"{report.taylor_nrmse[0][j]:.3e} exceeds {cap:.0e}"
            )
    return failures


def write_report_csv(report: BenchReport, path) -> None:
    """Long-format CSV: metric,component,key,value with full float precision."""
    lines = ["metric,component,key,value"]
    for m in range(len(report.derivative_nrmse)):
        for i, v in enumerate(report.derivative_nrmse[m]):
            lines.append(f"derivative_nrmse,{m},{i},{v:.17g}")
        for i, v in enumerate(report.coefficient_nrmse[m]):
            lines.append(f"coefficient_nrmse,{m},{i},{v:.17g}")
        for t1, v in zip(report.t1_values, report.taylor_nrmse[m]):
            lines.append(f"taylor_nrmse,{m},{t1:.17g},{v:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def format_report_table(report: BenchReport) -> str:
    """Aligned text table: orders as rows, one NRMSE column pair per component."""
    m = len(report.derivative_nrmse)
    head = [
        f"problem: {report.problem}  (max order {report.max_order}, "
        f"{report.points.size} points, seed {report.seed}, tau {report.tau:.6g})"
    ]
    cols = ["order"]
    for c in range(m):
        suffix = f"[{c}]" if m > 1 else ""
        cols += [f"derivative{suffix}", f"coefficient{suffix}"]
    widths = [max(len(t), 12) for t in cols]
    head.append("  ".join(t.rjust(w) for t, w in zip(cols, widths)))
    for i in range(report.max_order + 1):
        cells = [str(i)]
        for c in range(m):
            cells += [
                f"{report.derivative_nrmse[c][i]:.3e}",
                f"{report.coefficient_nrmse[c][i]:.3e}",
            ]
        head.append("  ".join(t.rjust(w) for t, w in zip(cells, widths)))
    if report.t1_values:
        head.append("")
        cols2 = ["t1"] + [
            f"evaluation[{c}]" if m > 1 else "evaluation" for c in range(m)
        ]
        w2 = [max(len(t), 12) for t in cols2]
        head.append("  ".join(t.rjust(w) for t, w in zip(cols2, w2)))
        for j, t1 in enumerate(report.t1_values):
            cells = [f"{t1:g}"] + [f"{report.taylor_nrmse[c][j]:.3e}" for c in range(m)]
            head.append("  ".join(t.rjust(w) for t, w in zip(cells, w2)))
    return "\n".join(head)


# -- method-of-lines reference solver ------------------------------------


def reference_solve(
    problem: PdeProblem,
    points,
    t1: float,
    cells: int = 2048,
    dt_max: float = 1e-6,
) -> list[np.ndarray]:
    """Short-horizon reference solution interpolated onto ``points``.

    Fourth-order centred differences on ``cells`` grid intervals (periodic
    wrap-around or odd reflection through zero-valued Dirichlet endpoints),
    classical fourth-order Runge-Kutta stepping with the step lowered below
    ``dt_max`` whenever the explicit stability bound demands it, and a cubic
    spline back onto the query points.
    """
    if t1 < 0 or t1 > 0.1:
        raise ValueError("reference solver horizon is limited to 0 <= t1 <= 0.1")
    if cells < 2048:
        raise ValueError("reference solver contract requires at least 2048 grid cells")
    if dt_max > 1e-6:
        raise ValueError("reference solver contract requires a time step of at most 1e-6")
    x_query = np.asarray(points, dtype=np.float64).ravel()
    lo, hi = problem.domain
    periodic = problem.boundary == "periodic"
    h = (hi - lo) / cells
    if periodic:
        grid = lo + h * np.arange(cells)
    else:
        grid = np.linspace(lo, hi, cells + 1)

    state = np.stack(problem.ic_numpy(grid))
    if t1 == 0.0:
        return _interpolate(problem, grid, state, x_query, periodic, hi)

    dt = _stable_step(problem, h, dt_max)
    n_steps = max(1, math.ceil(t1 / dt))
    dt = t1 / n_steps

    if periodic:
        def dx(u):
            return (
                -np.roll(u, -2) + 8 * np.roll(u, -1) - 8 * np.roll(u, 1) + np.roll(u, 2)
            ) / (12 * h)

        def dxx(u):
            return (
                -np.roll(u, -2)
                + 16 * np.roll(u, -1)
                - 30 * u
                + 16 * np.roll(u, 1)
                - np.roll(u, 2)
            ) / (12 * h * h)
    else:
        def _extend(u):
            return np.concatenate(([-u[2], -u[1]], u, [-u[-2], -u[-3]]))

        def dx(u):
            ue = _extend(u)
            return (-ue[4:] + 8 * ue[3:-1] - 8 * ue[1:-3] + ue[:-4]) / (12 * h)

        def dxx(u):
            ue = _extend(u)
            return (
                -ue[4:] + 16 * ue[3:-1] - 30 * ue[2:-2] + 16 * ue[1:-3] - ue[:-4]
            ) / (12 * h * h)

    m = problem.components

    def deriv(t, s):
        u = [s[c] for c in range(m)]
        ux = [dx(u[c]) for c in range(m)]
        uxx = [dxx(u[c]) for c in range(m)]
        out = np.stack(problem.rhs_numpy(u, ux, uxx, t, grid))
        if not periodic:
            out[:, 0] = 0.0
            out[:, -1] = 0.0
        return out

    t = 0.0
    for step in range(n_steps):
        k1 = deriv(t, state)
        k2 = deriv(t + dt / 2, state + (dt / 2) * k1)
        k3 = deriv(t + dt / 2, state + (dt / 2) * k2)
        k4 = deriv(t + dt, state + dt * k3)
        state = state + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        if step % 1000 == 999 and not np.isfinite(state).all():
            raise OracleFailure(f"reference solve went non-finite near t={t:.3e}")
    if not np.isfinite(state).all():
        raise OracleFailure("reference solve finished with non-finite values")
    return _interpolate(problem, grid, state, x_query, periodic, hi)


def _stable_step(problem: PdeProblem, h: float, dt_max: float) -> float:
    """Explicit RK4 stability bound for the stiffest advertised terms."""
    dt = dt_max
    if problem.diffusivity > 0:
        # fourth-order second-difference spectral radius is 16/(3 h^2)
        dt = min(dt, 2.5 * 3 * h * h / (16 * problem.diffusivity))
    if problem.advection_speed > 0:
        dt = min(dt, h / problem.advection_speed)
    return dt


def _interpolate(problem, grid, state, x_query, periodic, hi):
    out = []
    for c in range(problem.components):
        if periodic:
            xs = np.append(grid, hi)
            ys = np.append(state[c], state[c][0])
            spline = CubicSpline(xs, ys, bc_type="periodic")
        else:
            spline = CubicSpline(grid, state[c])
        out.append(spline(x_query))
    return out
