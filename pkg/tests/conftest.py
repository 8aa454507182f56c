"""Shared test helpers: series comparison, high-precision derivative oracle.

The derivative oracle is deliberately independent of the package's own jet
machinery: central finite differences evaluated in 60-digit arithmetic and
Richardson-extrapolated to kill the even-power error terms.  That gives
reference values good to far better than 1e-7 absolute for derivative orders
up to 4, which float-precision differences cannot reach for pi-scaled
initial profiles.
"""

import math

import mpmath as mp
import numpy as np
import pytest

from pdetaylor import TruncatedSeries, get_problem, reference_solve, sample_points
from pdetaylor.bench import default_exclusion


def flatten(series: TruncatedSeries) -> np.ndarray:
    """All leaf floats of a (possibly nested) series, in coefficient order."""
    leaves = []
    for c in series.coeffs:
        if isinstance(c, TruncatedSeries):
            leaves.append(flatten(c))
        else:
            leaves.append(np.asarray(c, dtype=np.float64).ravel())
    return np.concatenate(leaves)


def assert_series_close(a: TruncatedSeries, b: TruncatedSeries, rtol=1e-14, atol=1e-14):
    assert a.order == b.order
    fa, fb = flatten(a), flatten(b)
    np.testing.assert_allclose(fa, fb, rtol=rtol, atol=atol)


def eval_jet(jet: TruncatedSeries, dx: float):
    """Numerically evaluate a spatial jet at offset dx (Horner)."""
    acc = jet.coeffs[-1]
    for c in reversed(jet.coeffs[:-1]):
        acc = acc * dx + c
    return acc


def eval_nested(series: TruncatedSeries, eps: float, dx: float):
    """Evaluate a series whose coefficients are spatial jets at (eps, dx)."""
    vals = [eval_jet(c, dx) for c in series.coeffs]
    acc = vals[-1]
    for v in reversed(vals[:-1]):
        acc = acc * eps + v
    return acc


def mp_derivative(f, x: float, m: int, base_step=0.25, levels: int = 8) -> float:
    """m-th derivative of f at x: central differences + Richardson, 60 digits.

    f maps an mpmath float to an mpmath float and must be smooth on
    [x - m*base_step/2, x + m*base_step/2].  The symmetric m-th difference has
    an error series in even powers of the step, so each Richardson level
    multiplies the effective order by h^2; eight levels leave a residual far
    below 1e-20 for the profiles used here.
    """
    if m == 0:
        return float(f(mp.mpf(x)))
    with mp.workdps(60):
        xm = mp.mpf(x)
        h0 = mp.mpf(base_step)
        rows = []
        for j in range(levels):
            h = h0 / 2**j
            acc = mp.mpf(0)
            for i in range(m + 1):
                w = (-1) ** i * mp.binomial(m, i)
                acc += w * f(xm + (mp.mpf(m) / 2 - i) * h)
            rows.append(acc / h**m)
        for k in range(1, levels):
            rows = [
                (4**k * rows[j + 1] - rows[j]) / (4**k - 1)
                for j in range(len(rows) - 1)
            ]
        return float(rows[0])


def mp_initial_profiles(problem_name: str):
    """Component initial profiles as mpmath closures, from first principles."""
    prob = get_problem(problem_name)
    p = prob.params
    if problem_name == "heat":
        c = p["mode"] * mp.pi / p["length"]
        return [lambda x: mp.sin(c * x)]
    if problem_name == "diffusion":
        return [lambda x: mp.sin(mp.pi * x)]
    if problem_name == "wave":
        k2 = p["second_mode"]
        return [lambda x: mp.sin(mp.pi * x) + mp.sin(k2 * mp.pi * x), lambda x: mp.mpf(0)]
    if problem_name == "burgers":
        return [lambda x: -mp.sin(mp.pi * x)]
    if problem_name == "allen_cahn":
        return [lambda x: x**2 * mp.cos(mp.pi * x)]
    if problem_name == "schrodinger":
        return [lambda x: 2 * mp.sech(x), lambda x: mp.mpf(0)]
    raise KeyError(problem_name)


@pytest.fixture(scope="session")
def heat_reference_error() -> float:
    """Max-abs gap between the numerical reference and the heat closed form.

    Computed once per session; validates the reference solver before any test
    leans on it for problems without a closed form.
    """
    prob = get_problem("heat")
    pts = sample_points(prob, 20, tau=default_exclusion(prob), seed=2)
    ref = reference_solve(prob, pts, 0.01)
    exact = prob.exact(0.01, pts)
    return float(np.max(np.abs(ref[0] - exact[0])))


def factorial(i: int) -> int:
    return math.factorial(i)
