"""Truncated power series in a single infinitesimal.

A :class:`TruncatedSeries` stores the coefficients ``[c0, c1, ..., cn]`` of

    c0 + c1*eps + c2*eps**2 + ... + cn*eps**n,

where ``eps`` is an infinitesimal whose powers above ``n`` are discarded.
Addition is componentwise and multiplication is the convolution truncated at
order ``n``, so the coefficient of ``eps**k`` in a product only ever involves
input coefficients of order ``<= k``.  Division inverts the convolution and
requires an invertible leading coefficient; dividing by a pure infinitesimal
is an error rather than a renormalisation.

Coefficients live in a pluggable :class:`CoefficientAlgebra`.  The scalar
algebra over Python floats is provided here; batched (NumPy) and spatial-jet
algebras live in :mod:`pdetaylor.jets`.  Because a jet is itself a truncated
series, series can nest: a series in the time infinitesimal whose coefficients
are jets in a space increment, whose coefficients are batches of reals.

Analytic functions (exp, sin, cos, ln, constant powers, reciprocal, sech)
extend to series through the usual Taylor-composition recurrences; the
constant term is evaluated in the coefficient algebra, which recurses through
nested series automatically.

Series are immutable once constructed; share them freely.
"""

from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod


class OrderMismatchError(ValueError):
    """Binary operation on series of different truncation orders."""


class InfinitesimalDivisorError(ZeroDivisionError):
    """Division by a series whose leading coefficient is not invertible."""


class InfinitePartError(ArithmeticError):
    """Downward shift would discard a nonzero low-order coefficient."""


class LiftDomainError(ValueError):
    """Constant term lies outside the domain of the lifted function."""


class TruncationWarning(RuntimeWarning):
    """An operation truncated every stored order away."""


class CoefficientAlgebra(ABC):
    """Operations a coefficient type must support to sit under a series.

    Implementations are small stateless (or shape-carrying) objects; two
    algebra instances compare equal when they describe the same coefficient
    space, which is what series compatibility checks rely on.
    """

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def one(self): ...

    @abstractmethod
    def add(self, a, b): ...

    @abstractmethod
    def sub(self, a, b): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def div(self, a, b): ...

    @abstractmethod
    def scale(self, a, s: float):
        """Multiply an element by an ordinary real number."""

    @abstractmethod
    def is_zero(self, a) -> bool: ...

    @abstractmethod
    def is_invertible(self, a) -> bool: ...

    @abstractmethod
    def finite(self, a) -> bool:
        """True when the element contains no infinities or NaNs."""

    # analytic primitives, used for the constant term of lifted functions

    @abstractmethod
    def exp(self, a): ...

    @abstractmethod
    def sin_cos(self, a):
        """Return ``(sin(a), cos(a))`` as a pair."""

    @abstractmethod
    def log(self, a): ...

    @abstractmethod
    def pow(self, a, exponent: float): ...

    @abstractmethod
    def sech(self, a): ...

    def neg(self, a):
        return self.scale(a, -1.0)

    def from_real(self, s: float):
        return self.scale(self.one(), float(s))


class RealAlgebra(CoefficientAlgebra):
    """Plain float coefficients; the reference algebra implementation."""

    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def scale(self, a, s):
        return a * s

    def is_zero(self, a):
        return a == 0.0

    def is_invertible(self, a):
        return a != 0.0

    def finite(self, a):
        return math.isfinite(a)

    def exp(self, a):
        return math.exp(a)

    def sin_cos(self, a):
        return math.sin(a), math.cos(a)

    def log(self, a):
        if a <= 0.0:
            raise LiftDomainError(f"log requires a positive constant term, got {a}")
        return math.log(a)

    def pow(self, a, exponent):
        if a < 0.0 and not float(exponent).is_integer():
            raise LiftDomainError(
                f"non-integer power of a negative constant term: {a} ** {exponent}"
            )
        if a == 0.0 and exponent < 0:
            raise LiftDomainError("negative power of a zero constant term")
        return a ** exponent

    def sech(self, a):
        return 1.0 / math.cosh(a)

    def __eq__(self, other):
        return type(other) is RealAlgebra

    def __hash__(self):
        return hash(RealAlgebra)

    def __repr__(self):
        return "RealAlgebra()"


def _as_scalar(x):
    """Return x as a float when it is an ordinary number, else None."""
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, float)):
        return float(x)
    return None


class TruncatedSeries:
    """Coefficients of a power series in one infinitesimal, truncated at a fixed order.

    ``coeffs`` is a tuple of ``order + 1`` algebra elements, constant term
    first.  Instances are immutable; every operation returns a new series of
    the same order over the same algebra.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: CoefficientAlgebra, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its constant term")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, algebra, order: int) -> "TruncatedSeries":
        return cls(algebra, tuple(algebra.zero() for _ in range(order + 1)))

    @classmethod
    def constant(cls, algebra, value, order: int) -> "TruncatedSeries":
        tail = tuple(algebra.zero() for _ in range(order))
        return cls(algebra, (value,) + tail)

    @classmethod
    def variable(cls, algebra, value, order: int) -> "TruncatedSeries":
        """Series ``value + eps``: the seed for differentiating through ``value``."""
        if order < 1:
            raise ValueError("a variable seed needs order >= 1")
        tail = tuple(algebra.zero() for _ in range(order - 1))
        return cls(algebra, (value, algebra.one()) + tail)

    @classmethod
    def infinitesimal(cls, algebra, order: int) -> "TruncatedSeries":
        """The series ``eps`` itself: ``[0, 1, 0, ..., 0]``."""
        return cls.variable(algebra, algebra.zero(), order)

    # -- basic queries -------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant_term(self):
        return self.coeffs[0]

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({self.algebra!r}, {list(self.coeffs)!r})"

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.algebra != other.algebra:
            raise TypeError(
                f"incompatible coefficient algebras: {self.algebra!r} vs {other.algebra!r}"
            )
        if self.order != other.order:
            raise OrderMismatchError(
                f"series orders differ: {self.order} vs {other.order}"
            )

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        s = _as_scalar(other)
        alg = self.algebra
        if s is not None:
            head = alg.add(self.coeffs[0], alg.from_real(s))
            return TruncatedSeries(alg, (head,) + self.coeffs[1:])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        return TruncatedSeries(
            alg, tuple(alg.add(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        s = _as_scalar(other)
        alg = self.algebra
        if s is not None:
            head = alg.sub(self.coeffs[0], alg.from_real(s))
            return TruncatedSeries(alg, (head,) + self.coeffs[1:])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        return TruncatedSeries(
            alg, tuple(alg.sub(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        s = _as_scalar(other)
        if s is None:
            return NotImplemented
        return (-self) + s

    def __neg__(self):
        alg = self.algebra
        return TruncatedSeries(alg, tuple(alg.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        s = _as_scalar(other)
        alg = self.algebra
        if s is not None:
            return TruncatedSeries(alg, tuple(alg.scale(c, s) for c in self.coeffs))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(len(a)):
            acc = alg.mul(a[0], b[k])
            for i in range(1, k + 1):
                acc = alg.add(acc, alg.mul(a[i], b[k - i]))
            out.append(acc)
        return TruncatedSeries(alg, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _as_scalar(other)
        alg = self.algebra
        if s is not None:
            return self * (1.0 / s)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        a, b = self.coeffs, other.coeffs
        if not alg.is_invertible(b[0]):
            raise InfinitesimalDivisorError(
                "division by a series with non-invertible leading coefficient"
            )
        q = []
        for k in range(len(a)):
            acc = a[k]
            for j in range(1, k + 1):
                acc = alg.sub(acc, alg.mul(b[j], q[k - j]))
            q.append(alg.div(acc, b[0]))
        return TruncatedSeries(alg, q)

    def __rtruediv__(self, other):
        s = _as_scalar(other)
        if s is None:
            return NotImplemented
        return reciprocal(self) * s

    def __pow__(self, exponent):
        s = _as_scalar(exponent)
        if s is None:
            return NotImplemented
        return power(self, s)

    # -- shifts and truncation -------------------------------------------

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by ``eps**k``: shift coefficients towards higher order."""
        if not isinstance(k, int) or k <= 0:
            raise ValueError("shift_up needs a positive integer shift")
        alg = self.algebra
        n = self.order
        if k > n:
            warnings.warn(
                f"shift_up by {k} exceeds order {n}; every coefficient truncated",
                TruncationWarning,
                stacklevel=2,
            )
            return TruncatedSeries.zeros(alg, n)
        zeros = tuple(alg.zero() for _ in range(k))
        return TruncatedSeries(alg, zeros + self.coeffs[: n + 1 - k])

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by ``eps**k``; the k lowest coefficients must be zero."""
        if not isinstance(k, int) or k <= 0:
            raise ValueError("shift_down needs a positive integer shift")
        alg = self.algebra
        n = self.order
        if k > n:
            raise ValueError(f"shift_down by {k} exceeds order {n}")
        for j in range(k):
            if not alg.is_zero(self.coeffs[j]):
                raise InfinitePartError(
                    f"shift_down by {k} discards nonzero coefficient at order {j}"
                )
        zeros = tuple(alg.zero() for _ in range(k))
        return TruncatedSeries(alg, self.coeffs[k:] + zeros)

    def truncated(self, order: int) -> "TruncatedSeries":
        """Copy with the given truncation order (dropping or zero-padding)."""
        if order < 0:
            raise ValueError("order must be >= 0")
        if order <= self.order:
            return TruncatedSeries(self.algebra, self.coeffs[: order + 1])
        pad = tuple(self.algebra.zero() for _ in range(order - self.order))
        return TruncatedSeries(self.algebra, self.coeffs + pad)


# -- analytic lifts -----------------------------------------------------
#
# Each recurrence below follows from differentiating f(A(eps)) with respect
# to eps and matching coefficients; only the constant term ever evaluates f
# itself, so a lift over nested series recurses through the algebra.


def exp(series: TruncatedSeries) -> TruncatedSeries:
    """Exponential: k*E_k = sum_{j=1..k} j*A_j*E_{k-j}, E_0 = exp(A_0)."""
    _require_series(series)
    alg = series.algebra
    a = series.coeffs
    out = [alg.exp(a[0])]
    for k in range(1, len(a)):
        acc = alg.mul(a[1], out[k - 1])
        for j in range(2, k + 1):
            acc = alg.add(acc, alg.scale(alg.mul(a[j], out[k - j]), float(j)))
        out.append(alg.scale(acc, 1.0 / k))
    return TruncatedSeries(alg, out)


def sin_cos(series: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Sine and cosine together; their recurrences are coupled."""
    _require_series(series)
    alg = series.algebra
    a = series.coeffs
    s0, c0 = alg.sin_cos(a[0])
    s, c = [s0], [c0]
    for k in range(1, len(a)):
        sacc = alg.mul(a[1], c[k - 1])
        cacc = alg.mul(a[1], s[k - 1])
        for j in range(2, k + 1):
            sacc = alg.add(sacc, alg.scale(alg.mul(a[j], c[k - j]), float(j)))
            cacc = alg.add(cacc, alg.scale(alg.mul(a[j], s[k - j]), float(j)))
        s.append(alg.scale(sacc, 1.0 / k))
        c.append(alg.scale(cacc, -1.0 / k))
    return TruncatedSeries(alg, s), TruncatedSeries(alg, c)


def sin(series: TruncatedSeries) -> TruncatedSeries:
    return sin_cos(series)[0]


def cos(series: TruncatedSeries) -> TruncatedSeries:
    return sin_cos(series)[1]


def log(series: TruncatedSeries) -> TruncatedSeries:
    """Natural logarithm: L_k = (A_k - (1/k) sum_{j<k} j*L_j*A_{k-j}) / A_0."""
    _require_series(series)
    alg = series.algebra
    a = series.coeffs
    out = [alg.log(a[0])]
    for k in range(1, len(a)):
        acc = None
        for j in range(1, k):
            term = alg.scale(alg.mul(out[j], a[k - j]), float(j))
            acc = term if acc is None else alg.add(acc, term)
        num = a[k] if acc is None else alg.sub(a[k], alg.scale(acc, 1.0 / k))
        out.append(alg.div(num, a[0]))
    return TruncatedSeries(alg, out)


def power(series: TruncatedSeries, exponent: float) -> TruncatedSeries:
    """Raise a series to a constant real power.

    Non-negative integer exponents use plain repeated multiplication, which
    needs no invertible constant term; anything else uses the recurrence
    k*A_0*P_k = sum_{j=1..k} ((e+1)*j - k) * A_j * P_{k-j}.
    """
    _require_series(series)
    e = float(exponent)
    alg = series.algebra
    if e.is_integer() and e >= 0:
        result = TruncatedSeries.constant(alg, alg.one(), series.order)
        base = series
        n = int(e)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result
    a = series.coeffs
    if not alg.is_invertible(a[0]):
        raise LiftDomainError("power with non-integer or negative exponent needs an invertible constant term")
    out = [alg.pow(a[0], e)]
    for k in range(1, len(a)):
        acc = None
        for j in range(1, k + 1):
            w = (e + 1.0) * j - k
            term = alg.scale(alg.mul(a[j], out[k - j]), w)
            acc = term if acc is None else alg.add(acc, term)
        out.append(alg.div(alg.scale(acc, 1.0 / k), a[0]))
    return TruncatedSeries(alg, out)


def reciprocal(series: TruncatedSeries) -> TruncatedSeries:
    _require_series(series)
    alg = series.algebra
    ones = TruncatedSeries.constant(alg, alg.one(), series.order)
    return ones / series


def sech(series: TruncatedSeries) -> TruncatedSeries:
    """Hyperbolic secant via 1 / cosh, with cosh built from exp."""
    _require_series(series)
    e = exp(series)
    cosh = (e + reciprocal(e)) * 0.5
    return reciprocal(cosh)


_LIFTS = {
    "exp": exp,
    "sin": sin,
    "cos": cos,
    "ln": log,
    "log": log,
    "reciprocal": reciprocal,
    "sech": sech,
}


def analytic_lift(name: str, series: TruncatedSeries, exponent: float | None = None):
    """Apply a named analytic function to a series.

    ``pow_const`` requires ``exponent``; the other names are exp, sin, cos,
    ln, reciprocal and sech.
    """
    if name == "pow_const":
        if exponent is None:
            raise ValueError("pow_const needs an exponent")
        return power(series, exponent)
    try:
        f = _LIFTS[name]
    except KeyError:
        known = ", ".join(sorted(_LIFTS) + ["pow_const"])
        raise ValueError(f"unknown analytic function {name!r}; known: {known}") from None
    return f(series)


def _require_series(obj):
    if not isinstance(obj, TruncatedSeries):
        raise TypeError(f"expected a TruncatedSeries, got {type(obj).__name__}")
