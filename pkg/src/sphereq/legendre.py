"""Legendre polynomials: values, derivatives of any order, norms, and the
spherical-harmonic dimension count.

Runtime evaluation uses the stable three-term (Bonnet) recurrence; the m-th
derivative is carried alongside the value by differentiating the recurrence m
times (Leibniz in the ``x`` factor), which costs O(n*m) and stays
forward-stable on [-1, 1].  An exact rational construction from Rodrigues'
formula is kept as a small-degree oracle; expanding it symbolically costs
O(2^n), so it is never used for runtime evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import CapabilityError, DomainError

#: Largest degree for which the exact rational oracle is built.
N_EXACT_MAX = 60


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("legendre argument must lie in [-1, 1]")
    return arr


def _check_degree(n: int) -> int:
    if n != int(n) or n < 0:
        raise DomainError("degree must be a non-negative integer")
    return int(n)


def legendre_eval(n: int, x):
    """Evaluate P_n(x) by Bonnet's recurrence.

    Parameters
    ----------
    n : int
        Degree, >= 0.
    x : float or ndarray
        Abscissae in [-1, 1].

    Returns
    -------
    float or ndarray with P_n(x), normalized so that P_n(1) = 1.
    """
    n = _check_degree(n)
    arr = _check_x(x)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    p_prev = np.ones_like(arr)
    if n == 0:
        return float(p_prev[0]) if scalar else p_prev
    p_cur = arr.copy()
    for k in range(1, n):
        p_next = ((2 * k + 1) * arr * p_cur - k * p_prev) / (k + 1)
        p_prev, p_cur = p_cur, p_next
    return float(p_cur[0]) if scalar else p_cur


def legendre_derivative_eval(n: int, m: int, x):
    """Evaluate the m-th derivative d^m P_n / dx^m.

    For ``m == 0`` this equals :func:`legendre_eval`; for ``m > n`` the result
    is exactly zero.
    """
    n = _check_degree(n)
    if m != int(m) or m < 0:
        raise DomainError("derivative order must be a non-negative integer")
    m = int(m)
    arr = _check_x(x)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if m > n:
        out = np.zeros_like(arr)
        return 0.0 if scalar else out
    if m == 0:
        return legendre_eval(n, x)
    values = None
    for k, table in enumerate(derivative_recurrence(n, m, arr)):
        if k == n:
            values = table[m]
    return float(values[0]) if scalar else values


def derivative_recurrence(n_max: int, m: int, x: np.ndarray) -> Iterator[np.ndarray]:
    """Yield, for each degree k = 0..n_max, the stack [P_k, P_k', ..., P_k^(m)].

    Differentiating Bonnet's recurrence j times gives
    ``(k+1) P_{k+1}^(j) = (2k+1)(x P_k^(j) + j P_k^(j-1)) - k P_{k-1}^(j)``,
    a forward recurrence on the value/derivative stack.  Consumers that need
    the whole degree range (series evaluators) iterate this generator instead
    of calling :func:`legendre_derivative_eval` per degree.
    """
    x = np.asarray(x, dtype=float)
    prev = np.zeros((m + 1,) + x.shape)
    prev[0] = 1.0
    yield prev
    if n_max == 0:
        return
    cur = np.zeros_like(prev)
    cur[0] = x
    if m >= 1:
        cur[1] = 1.0
    yield cur
    for k in range(1, n_max):
        nxt = np.empty_like(cur)
        for j in range(m + 1):
            t = x * cur[j]
            if j >= 1:
                t = t + j * cur[j - 1]
            nxt[j] = ((2 * k + 1) * t - k * prev[j]) / (k + 1)
        prev, cur = cur, nxt
        yield cur


def legendre_norm(n: int) -> float:
    """L2 norm of P_n over [-1, 1]: sqrt(2 / (2n + 1))."""
    n = _check_degree(n)
    return math.sqrt(2.0 / (2 * n + 1))


def harmonic_dimension(d: int, n: int) -> int:
    """Dimension of the space of degree-n spherical harmonics on S^d.

    Computed exactly as ``(2n+d-1) * (n+d-2)! / ((d-1)! n!)`` with integer
    arithmetic; for d = 2 this reduces to 2n + 1.
    """
    if d != int(d) or d < 1:
        raise DomainError("sphere dimension must be a positive integer")
    n = _check_degree(n)
    d = int(d)
    if n == 0:
        return 1
    z = Fraction(2 * n + d - 1) * Fraction(
        math.factorial(n + d - 2), math.factorial(d - 1) * math.factorial(n)
    )
    assert z.denominator == 1
    return int(z)


@dataclass(frozen=True)
class PolynomialCoefficients:
    """Exact polynomial sum(coeffs[k] * x^k), coefficients as rationals."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient count must equal degree + 1")
        if self.degree >= 1 and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    def evaluate(self, x):
        """Horner evaluation; exact when ``x`` is a Fraction or int."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PolynomialCoefficients":
        if self.degree == 0:
            return PolynomialCoefficients(0, (Fraction(0),))
        new = tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1)
        return PolynomialCoefficients(self.degree - 1, new)

    def derivative_order(self, m: int) -> "PolynomialCoefficients":
        poly = self
        for _ in range(m):
            poly = poly.derivative()
        return poly


def rodrigues_coefficients(n: int) -> PolynomialCoefficients:
    """Exact coefficients of P_n from Rodrigues' formula.

    P_n(x) = 1/(2^n n!) d^n/dx^n (x^2 - 1)^n, expanded with rational
    arithmetic.  Limited to ``n <= N_EXACT_MAX`` to keep the expansion cheap.
    """
    n = _check_degree(n)
    if n > N_EXACT_MAX:
        raise CapabilityError(
            f"exact Rodrigues expansion supported up to degree {N_EXACT_MAX}"
        )
    coeffs = [Fraction(0)] * (n + 1)
    scale = Fraction(1, 2**n * math.factorial(n))
    for k in range((n + 1) // 2, n + 1):
        # d^n/dx^n of binom(n,k) (-1)^(n-k) x^(2k) -> (2k)!/(2k-n)! x^(2k-n)
        c = (
            Fraction(math.comb(n, k) * (-1) ** (n - k))
            * Fraction(math.factorial(2 * k), math.factorial(2 * k - n))
            * scale
        )
        coeffs[2 * k - n] = c
    return PolynomialCoefficients(n, tuple(coeffs))
