"""Built-in evolution problems ``U_t = F(U, U_x, U_xx, t, x)``.

Each problem bundles the pieces the expansion driver and the benchmark
harness need:

* ``ic``          initial condition evaluated on a spatial jet seed,
* ``rhs``         right-hand side evaluated on series-of-jets arguments,
* ``ic_numpy``    the same initial condition on plain arrays,
* ``rhs_numpy``   the same right-hand side on plain arrays,
* closed-form ``exact_solution`` / ``exact_time_derivative`` where one exists.

``rhs`` must be written entirely in series operations (arithmetic operators
plus the lifts from :mod:`pdetaylor.series`); the driver feeds it series in
the time infinitesimal whose coefficients are spatial jets.  The numpy pair
is deliberately a separate implementation of the same equations: it backs the
finite-difference reference solver, which must not share code with the series
path it cross-checks.

Second-order problems are posed as first-order systems in time (wave and the
split real/imaginary Schrodinger system have two components).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .series import TruncatedSeries, cos, exp, sech, sin

PI = math.pi


class UnknownProblemError(ValueError):
    """Requested problem name is not registered."""


class NoExactOracleError(ValueError):
    """Problem has no closed-form solution to compare against."""


@dataclass(frozen=True)
class PdeProblem:
    """One evolution problem plus its evaluators and oracle metadata.

    ``boundary`` is either ``"dirichlet"`` (solution vanishes at both ends,
    oddly extendable) or ``"periodic"``; the reference solver uses it to close
    its finite-difference stencils.  ``diffusivity`` and ``advection_speed``
    bound the stiffest second- and first-order terms for time-step selection;
    they play no role in the series path.
    """

    name: str
    components: int
    domain: tuple[float, float]
    t_end: float
    params: dict[str, float]
    ic: Callable[[TruncatedSeries], list[TruncatedSeries]]
    rhs: Callable[..., list[TruncatedSeries]]
    ic_numpy: Callable[[np.ndarray], list[np.ndarray]]
    rhs_numpy: Callable[..., list[np.ndarray]]
    boundary: str = "dirichlet"
    spatial_order: int = 2
    diffusivity: float = 0.0
    advection_speed: float = 0.0
    exact_solution: Callable[[float, np.ndarray], list[np.ndarray]] | None = None
    exact_time_derivative: Callable[[int, float, np.ndarray], list[np.ndarray]] | None = None

    @property
    def has_exact_oracle(self) -> bool:
        return self.exact_solution is not None

    def exact(self, t: float, x) -> list[np.ndarray]:
        if self.exact_solution is None:
            raise NoExactOracleError(f"problem {self.name!r} has no closed-form solution")
        return self.exact_solution(t, np.asarray(x, dtype=np.float64))

    def exact_derivative(self, order: int, t: float, x) -> list[np.ndarray]:
        """Closed-form ``d^order U / dt^order`` at time ``t``, per component."""
        if self.exact_time_derivative is None:
            raise NoExactOracleError(f"problem {self.name!r} has no closed-form derivatives")
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        return self.exact_time_derivative(order, t, np.asarray(x, dtype=np.float64))


def _merge_params(defaults: dict[str, float], overrides: dict[str, float] | None, name: str):
    params = dict(defaults)
    if overrides:
        unknown = set(overrides) - set(defaults)
        if unknown:
            raise ValueError(
                f"unknown parameter(s) {sorted(unknown)} for problem {name!r}; "
                f"valid: {sorted(defaults)}"
            )
        params.update({k: float(v) for k, v in overrides.items()})
    return params


def _heat(overrides=None) -> PdeProblem:
    """U_t = alpha * U_xx on [0, length], U(0, x) = sin(mode*pi*x/length).

    Exact solution exp(kappa*t) * sin(c*x) with c = mode*pi/length and
    kappa = -alpha*c**2, so every time derivative is kappa**i times U.
    """
    params = _merge_params({"alpha": 0.4, "length": 1.0, "mode": 1.0}, overrides, "heat")
    alpha, length, mode = params["alpha"], params["length"], params["mode"]
    c = mode * PI / length
    kappa = -alpha * c * c

    def ic(seed):
        return [sin(seed * c)]

    def rhs(u, u_x, u_xx, t, x):
        return [u_xx[0] * alpha]

    def ic_numpy(x):
        return [np.sin(c * x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        return [alpha * u_xx[0]]

    def exact_solution(t, x):
        return [math.exp(kappa * t) * np.sin(c * x)]

    def exact_time_derivative(i, t, x):
        return [kappa**i * math.exp(kappa * t) * np.sin(c * x)]

    return PdeProblem(
        name="heat",
        components=1,
        domain=(0.0, length),
        t_end=1.0,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="dirichlet",
        diffusivity=alpha,
        exact_solution=exact_solution,
        exact_time_derivative=exact_time_derivative,
    )


def _diffusion(overrides=None) -> PdeProblem:
    """U_t = U_xx - exp(-t)*(sin(pi x) - pi^2 sin(pi x)) on [-1, 1].

    Forced so that the exact solution is exp(-t)*sin(pi x); its time
    derivatives simply alternate sign, which makes the problem a sharp probe
    of round-off growth across expansion orders.
    """
    params = _merge_params({}, overrides, "diffusion")

    def ic(seed):
        return [sin(seed * PI)]

    def rhs(u, u_x, u_xx, t, x):
        s = sin(x * PI)
        return [u_xx[0] - exp(-t) * (s - s * (PI * PI))]

    def ic_numpy(x):
        return [np.sin(PI * x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        s = np.sin(PI * x)
        return [u_xx[0] - math.exp(-t) * (s - PI * PI * s)]

    def exact_solution(t, x):
        return [math.exp(-t) * np.sin(PI * x)]

    def exact_time_derivative(i, t, x):
        return [(-1.0) ** i * math.exp(-t) * np.sin(PI * x)]

    return PdeProblem(
        name="diffusion",
        components=1,
        domain=(-1.0, 1.0),
        t_end=1.0,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="dirichlet",
        diffusivity=1.0,
        exact_solution=exact_solution,
        exact_time_derivative=exact_time_derivative,
    )


def _wave(overrides=None) -> PdeProblem:
    """U_tt = speed^2 * U_xx on [0, 1], split into (U, V) with U_t = V.

    Initial displacement sin(pi x) + sin(second_mode*pi x), zero initial
    velocity.  With angular frequencies w1 = speed*pi and w2 =
    second_mode*speed*pi the solution is a sum of standing waves, and the
    i-th time derivative cycles through cos/-sin/-cos/sin prefactors.
    """
    params = _merge_params({"speed": 1.0, "second_mode": 1.0}, overrides, "wave")
    speed, second_mode = params["speed"], params["second_mode"]
    c2 = speed * speed
    w1 = speed * PI
    w2 = second_mode * speed * PI

    def ic(seed):
        return [sin(seed * PI) + sin(seed * (second_mode * PI)), seed * 0.0]

    def rhs(u, u_x, u_xx, t, x):
        return [u[1], u_xx[0] * c2]

    def ic_numpy(x):
        return [np.sin(PI * x) + np.sin(second_mode * PI * x), np.zeros_like(x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        return [u[1], c2 * u_xx[0]]

    def _standing(i, t, x):
        # d^i/dt^i of sin(k x) * cos(w t), summed over the two modes
        phase = i % 4
        if phase == 0:
            f1, f2 = math.cos(w1 * t), math.cos(w2 * t)
        elif phase == 1:
            f1, f2 = -math.sin(w1 * t), -math.sin(w2 * t)
        elif phase == 2:
            f1, f2 = -math.cos(w1 * t), -math.cos(w2 * t)
        else:
            f1, f2 = math.sin(w1 * t), math.sin(w2 * t)
        return (w1**i * f1) * np.sin(PI * x) + (w2**i * f2) * np.sin(second_mode * PI * x)

    def exact_solution(t, x):
        return [_standing(0, t, x), _standing(1, t, x)]

    def exact_time_derivative(i, t, x):
        return [_standing(i, t, x), _standing(i + 1, t, x)]

    return PdeProblem(
        name="wave",
        components=2,
        domain=(0.0, 1.0),
        t_end=1.0,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="dirichlet",
        advection_speed=speed,
        exact_solution=exact_solution,
        exact_time_derivative=exact_time_derivative,
    )


def _burgers(overrides=None) -> PdeProblem:
    """U_t = -U*U_x + viscosity*U_xx on [-1, 1], U(0, x) = -sin(pi x)."""
    params = _merge_params({"viscosity": 0.01 / PI}, overrides, "burgers")
    nu = params["viscosity"]

    def ic(seed):
        return [-sin(seed * PI)]

    def rhs(u, u_x, u_xx, t, x):
        return [u_xx[0] * nu - u[0] * u_x[0]]

    def ic_numpy(x):
        return [-np.sin(PI * x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        return [nu * u_xx[0] - u[0] * u_x[0]]

    return PdeProblem(
        name="burgers",
        components=1,
        domain=(-1.0, 1.0),
        t_end=1.0,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="dirichlet",
        diffusivity=nu,
        advection_speed=1.0,
    )


def _allen_cahn(overrides=None) -> PdeProblem:
    """U_t = diffusion*U_xx + reaction*(U - U^3) on [-1, 1], periodic.

    U(0, x) = x^2 * cos(pi x).
    """
    params = _merge_params({"diffusion": 1e-4, "reaction": 5.0}, overrides, "allen_cahn")
    d, lam = params["diffusion"], params["reaction"]

    def ic(seed):
        return [seed * seed * cos(seed * PI)]

    def rhs(u, u_x, u_xx, t, x):
        v = u[0]
        return [u_xx[0] * d + (v - v * v * v) * lam]

    def ic_numpy(x):
        return [x * x * np.cos(PI * x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        v = u[0]
        return [d * u_xx[0] + lam * (v - v * v * v)]

    return PdeProblem(
        name="allen_cahn",
        components=1,
        domain=(-1.0, 1.0),
        t_end=1.0,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="periodic",
        diffusivity=d,
    )


def _schrodinger(overrides=None) -> PdeProblem:
    """Cubic Schrodinger i*H_t = -0.5*H_xx - |H|^2 H on [-5, 5], periodic.

    Split into real and imaginary parts H = U + i*V:

        U_t = -0.5*V_xx - (U^2 + V^2)*V
        V_t =  0.5*U_xx + (U^2 + V^2)*U

    with H(0, x) = 2*sech(x).
    """
    params = _merge_params({}, overrides, "schrodinger")

    def ic(seed):
        return [sech(seed) * 2.0, seed * 0.0]

    def rhs(u, u_x, u_xx, t, x):
        amp = u[0] * u[0] + u[1] * u[1]
        return [u_xx[1] * (-0.5) - amp * u[1], u_xx[0] * 0.5 + amp * u[0]]

    def ic_numpy(x):
        return [2.0 / np.cosh(x), np.zeros_like(x)]

    def rhs_numpy(u, u_x, u_xx, t, x):
        amp = u[0] * u[0] + u[1] * u[1]
        return [-0.5 * u_xx[1] - amp * u[1], 0.5 * u_xx[0] + amp * u[0]]

    return PdeProblem(
        name="schrodinger",
        components=2,
        domain=(-5.0, 5.0),
        t_end=PI / 2,
        params=params,
        ic=ic,
        rhs=rhs,
        ic_numpy=ic_numpy,
        rhs_numpy=rhs_numpy,
        boundary="periodic",
        diffusivity=0.5,
    )


_FACTORIES: dict[str, Callable[..., PdeProblem]] = {
    "heat": _heat,
    "diffusion": _diffusion,
    "wave": _wave,
    "burgers": _burgers,
    "allen_cahn": _allen_cahn,
    "schrodinger": _schrodinger,
}


def available_problems() -> list[str]:
    return sorted(_FACTORIES)


def get_problem(name: str, params: dict[str, float] | None = None) -> PdeProblem:
    """Build a registered problem, optionally overriding its parameters."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise UnknownProblemError(
            f"unknown problem {name!r}; available: {', '.join(available_problems())}"
        ) from None
    return factory(params)
