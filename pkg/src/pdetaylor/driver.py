"""Taylor expansion in time of an evolution problem at t = 0.

The state of a problem ``U_t = F(U, U_x, U_xx, t, x)`` advanced by an
infinitesimal step ``h`` is a truncated series ``U(h, X) = C_0 + C_1*h + ...
+ C_K*h**K`` whose coefficients are spatial jets at the batch points ``X``.
The coefficients are grown one order per iteration:

1. seed ``C_0`` with the initial condition evaluated on a jet of ``x``;
2. at iteration ``i``, spatially differentiate only the newest coefficient
   ``C_{i-1}`` (all older derivatives are reused unchanged), evaluate ``F`` on
   the series truncated at order ``i - 1``, and read off its top coefficient
   ``F_{i-1}``; then ``C_i = F_{i-1} / i``.

Because the series coefficient of order ``k`` in any product depends only on
input coefficients of order ``<= k``, the computed ``C_0 ... C_K`` do not
change if the expansion is re-run with a larger ``K``.

Each spatial differentiation consumes jet orders, so ``C_0`` is seeded with
``2*(K+1)`` orders (two per iteration for a second-order operator) and the
working jet order shrinks by two per iteration; coefficient values are exact
to the end regardless, for the same triangularity reason.

The expansion stores the raw coefficients ``C_i``; multiplying by ``i!`` only
when actual derivatives are requested keeps the factorial round-off out of
the stored data.  ``K`` is capped where ``K!`` stops being exact in float64
terms of interest (20).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jets import BatchAlgebra, JetAlgebra, derivative, seed_variable
from .problems import PdeProblem
from .series import TruncatedSeries

MAX_ORDER = 20


class DivergenceError(ArithmeticError):
    """Expansion produced a non-finite coefficient at some order."""

    def __init__(self, order: int, component: int):
        self.order = order
        self.component = component
        super().__init__(
            f"non-finite expansion coefficient at order {order} (component {component})"
        )


@dataclass(frozen=True)
class TaylorExpansion:
    """Time-Taylor coefficients of a problem's solution at t = 0.

    ``coeffs[m][i]`` is the batch of values of ``C_i`` for component ``m``:
    the i-th Taylor coefficient (not the derivative) at each point.
    ``jet_tails[m][i]`` retains the full spatial jet each coefficient was born
    with, for diagnostics.
    """

    problem: str
    points: np.ndarray
    max_order: int
    components: int
    coeffs: tuple[tuple[np.ndarray, ...], ...]
    jet_tails: tuple[tuple[TruncatedSeries, ...], ...]

    def derivatives(self) -> list[list[np.ndarray]]:
        """Time derivatives ``d^i U/dt^i = i! * C_i`` per component and order."""
        return [
            [math.factorial(i) * c for i, c in enumerate(comp)]
            for comp in self.coeffs
        ]

    def evaluate(self, t1: float) -> list[np.ndarray]:
        """Evaluate the truncated series at a finite time by Horner's rule."""
        t1 = float(t1)
        out = []
        for comp in self.coeffs:
            acc = comp[self.max_order].copy()
            for i in range(self.max_order - 1, -1, -1):
                acc = acc * t1 + comp[i]
            out.append(acc)
        return out


def compute_expansion(problem: PdeProblem, points, max_order: int) -> TaylorExpansion:
    """Expand the problem's solution in time around t = 0 at the given points.

    ``points`` must lie strictly inside the problem domain; ``max_order`` is
    the highest retained time order K, between 1 and 20.
    """
    x = np.asarray(points, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("need at least one expansion point")
    lo, hi = problem.domain
    if not bool(np.all((x > lo) & (x < hi))):
        raise ValueError(f"expansion points must lie strictly inside ({lo}, {hi})")
    if not isinstance(max_order, int) or not 1 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must be an integer in 1..{MAX_ORDER}")

    m = problem.components
    step = problem.spatial_order
    seed_order = step * (max_order + 1)
    batch = BatchAlgebra(x.size)
    seed = seed_variable(x, seed_order)

    g = problem.ic(seed)
    if len(g) != m:
        raise ValueError(f"initial condition returned {len(g)} components, expected {m}")

    # Per component: the coefficient jets and their reusable spatial derivatives.
    jets = [[g[c]] for c in range(m)]
    jets_x = [[derivative(g[c], 1)] for c in range(m)]
    jets_xx = [[derivative(g[c], 2)] for c in range(m)]

    for i in range(1, max_order + 1):
        work_order = seed_order - step * i
        alg = JetAlgebra(batch, work_order)
        n_eps = i - 1

        u = [_series_of_jets(alg, jets[c], work_order) for c in range(m)]
        u_x = [_series_of_jets(alg, jets_x[c], work_order) for c in range(m)]
        u_xx = [_series_of_jets(alg, jets_xx[c], work_order) for c in range(m)]
        t_series = (
            TruncatedSeries.infinitesimal(alg, n_eps)
            if n_eps >= 1
            else TruncatedSeries.zeros(alg, 0)
        )
        x_series = TruncatedSeries.constant(alg, seed.truncated(work_order), n_eps)

        f = problem.rhs(u, u_x, u_xx, t_series, x_series)
        if len(f) != m:
            raise ValueError(f"rhs returned {len(f)} components, expected {m}")
        for c in range(m):
            if not isinstance(f[c], TruncatedSeries) or f[c].order != n_eps:
                raise TypeError(
                    "rhs must return series of the same order it was given; "
                    "write it entirely in series operations"
                )
            top = f[c].coeffs[n_eps]
            new_jet = top * (1.0 / i)
            if not alg.finite(new_jet):
                raise DivergenceError(order=i, component=c)
            jets[c].append(new_jet)
            jets_x[c].append(derivative(new_jet, 1))
            jets_xx[c].append(derivative(new_jet, 2))

    coeffs = tuple(
        tuple(jet.coeffs[0] for jet in jets[c]) for c in range(m)
    )
    tails = tuple(tuple(jets[c]) for c in range(m))
    return TaylorExpansion(
        problem=problem.name,
        points=x,
        max_order=max_order,
        components=m,
        coeffs=coeffs,
        jet_tails=tails,
    )


def _series_of_jets(alg: JetAlgebra, jet_list, work_order: int) -> TruncatedSeries:
    """Stack stored jets as series coefficients, trimmed to the working order."""
    return TruncatedSeries(alg, tuple(j.truncated(work_order) for j in jet_list))
