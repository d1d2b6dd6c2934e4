"""Quality scores for spherical point systems.

Three scoring routes share one deterministic pairwise-summation backend:

* closed-form double sums (:func:`rms_discrepancy`, :func:`mean_pair_discrepancy`,
  :func:`energy`),
* the truncated reciprocal-symbol Legendre series
  (:func:`series_generalized_discrepancy`, minimized over derivative order by
  :func:`min_generalized_discrepancy`),
* quadratic forms of discrete signed measures (:func:`signed_discrepancy`).

All pair sums accumulate in fixed index order with compensated block merging,
so reports are bit-identical across runs and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, DomainError, SingularKernelError
from .kernels import (
    KernelSpec,
    SymbolSequence,
    is_singular_at_coincidence,
    kernel_eval,
)
from .legendre import derivative_recurrence
from .summation import block_sum, blocked_pair_reduce, neumaier_sum

INCLUDE = "include"
EXCLUDE = "exclude"

#: Highest derivative order accepted by the series evaluators.
M_SERIES_MAX = 4

_COINCIDENCE_T = 1.0 - 1e-14


@dataclass(frozen=True)
class PointSet:
    """An ordered collection of unit vectors in R^3."""

    points: np.ndarray
    seed: int | None = None
    provenance: str | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DomainError("points must be an (N, 3) array")
        if pts.shape[0] < 1:
            raise DomainError("a point set holds at least one point")
        norms = np.sqrt(np.sum(pts * pts, axis=1))
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise DomainError("every point must have unit norm (within 1e-12)")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class WeightedMeasure:
    """A discrete signed measure: weighted unit-point masses."""

    points: PointSet
    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=float).ravel()
        if w.size != len(self.points):
            raise DomainError("weight count must equal point count")
        object.__setattr__(self, "weights", w)


@dataclass
class DiscrepancyReport:
    """One scoring result plus its provenance."""

    kernel: KernelSpec
    n_points: int
    method: str
    diagonal_policy: str
    m: int
    value: float
    n_max: int | None = None
    negative_sum_flag: bool = False
    tail_estimate: float | None = None
    flags: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "kernel": self.kernel.name,
            "m": self.m,
            "method": self.method,
            "diagonal": self.diagonal_policy,
            "N": self.n_points,
            "n_max": self.n_max,
            "value": self.value,
            "flags": list(self.flags),
        }


def _dot_rows(block: np.ndarray, pts: np.ndarray) -> np.ndarray:
    # elementwise three-term dot: avoids BLAS so results do not depend on
    # the library's thread count
    t = (
        block[:, 0][:, None] * pts[:, 0][None, :]
        + block[:, 1][:, None] * pts[:, 1][None, :]
        + block[:, 2][:, None] * pts[:, 2][None, :]
    )
    return np.clip(t, -1.0, 1.0)


def pair_dot_matrix(pts: PointSet) -> np.ndarray:
    """Full matrix of pairwise dot products, clipped to [-1, 1].

    The diagonal is pinned to exactly 1 (unit vectors by contract).
    """
    p = pts.points
    t = _dot_rows(p, p)
    np.fill_diagonal(t, 1.0)
    return t


def _check_coincidences(spec: KernelSpec, pts: PointSet) -> None:
    if not is_singular_at_coincidence(spec):
        return
    p = pts.points
    n = len(pts)
    for i0 in range(0, n, 256):
        i1 = min(i0 + 256, n)
        t = _dot_rows(p[i0:i1], p)
        for local in range(i1 - i0):
            t[local, i0 + local] = -2.0
        hits = np.argwhere(t >= _COINCIDENCE_T)
        if hits.size:
            i, j = int(hits[0, 0]) + i0, int(hits[0, 1])
            raise SingularKernelError(
                spec.name,
                f"coincident points at indices {i} and {j}",
                indices=(i, j),
            )


def _pair_kernel_sum(pts: PointSet, spec: KernelSpec, diagonal_policy: str) -> float:
    if diagonal_policy not in (INCLUDE, EXCLUDE):
        raise DomainError(f"unknown diagonal policy {diagonal_policy!r}")
    if is_singular_at_coincidence(spec) and diagonal_policy == INCLUDE:
        raise SingularKernelError(
            spec.name, "singular at coincidence; the diagonal must be excluded"
        )
    _check_coincidences(spec, pts)
    p = pts.points
    tspec = spec.with_convention("dot_product_t")
    exclude = diagonal_policy == EXCLUDE

    def row_block(i0: int, i1: int) -> float:
        t = _dot_rows(p[i0:i1], p)
        # the Gram diagonal is exactly 1 for unit vectors; pinning it avoids
        # the half-chord sqrt amplifying last-bit norm rounding
        for local in range(i1 - i0):
            t[local, i0 + local] = 0.0 if exclude else 1.0
        k = np.atleast_2d(kernel_eval(tspec, t))
        if exclude:
            for local in range(i1 - i0):
                k[local, i0 + local] = 0.0
        return block_sum(k)

    return blocked_pair_reduce(len(pts), row_block)


def rms_discrepancy(
    pts: PointSet, spec: KernelSpec, diagonal_policy: str = INCLUDE
) -> DiscrepancyReport:
    """Closed-form score (1/N) sqrt(max(0, sum_ij K(x_i . x_j))).

    A negative pre-sqrt sum is clamped to zero and flagged.
    """
    s = _pair_kernel_sum(pts, spec, diagonal_policy)
    clamped = s < 0.0
    value = math.sqrt(max(0.0, s)) / len(pts)
    return DiscrepancyReport(
        kernel=spec,
        n_points=len(pts),
        method="pairwise_rms",
        diagonal_policy=diagonal_policy,
        m=spec.m,
        value=value,
        negative_sum_flag=clamped,
        flags=["negative_sum"] if clamped else [],
    )


def mean_pair_discrepancy(
    pts: PointSet, spec: KernelSpec, diagonal_policy: str = INCLUDE
) -> DiscrepancyReport:
    """Mean pairwise kernel value (1/N^2) sum_ij K, reported signed."""
    s = _pair_kernel_sum(pts, spec, diagonal_policy)
    return DiscrepancyReport(
        kernel=spec,
        n_points=len(pts),
        method="mean_pair",
        diagonal_policy=diagonal_policy,
        m=spec.m,
        value=s / len(pts) ** 2,
    )


def energy(pts: PointSet, spec: KernelSpec) -> float:
    """Configuration energy (1/N^2) sum_{i != j} K(x_i, x_j)."""
    return mean_pair_discrepancy(pts, spec, EXCLUDE).value


def series_generalized_discrepancy(
    pts: PointSet,
    family: str,
    m: int = 0,
    n_max: int = 2000,
    s: float | None = None,
) -> DiscrepancyReport:
    """Truncated-series score (1/N) sqrt(sum_n (2n+1)/(4pi A_n^2) sum_ij P_n^(m)).

    The diagonal is always included (each term is finite).  The report
    carries the last contributing term as a tail estimate and flags
    apparent non-convergence (the final decade of terms still contributing
    more than 1e-3 of the total).
    """
    if n_max < 1:
        raise DomainError("series truncation must be >= 1")
    if m < 0 or m > M_SERIES_MAX:
        raise CapabilityError(f"series derivative order limited to 0..{M_SERIES_MAX}")
    weights = SymbolSequence(family, s).series_weights(n_max)
    t = pair_dot_matrix(pts).ravel()
    terms = []
    for n, stack in enumerate(derivative_recurrence(n_max, m, t)):
        if n >= 1 and weights[n] != 0.0:
            terms.append(weights[n] * block_sum(stack[m]))
    flags = []
    if not terms:
        total = 0.0
        tail = 0.0
        flags.append("empty_sum")
    else:
        total = neumaier_sum(terms)
        tail = abs(terms[-1])
        tail_block = abs(neumaier_sum(terms[-max(1, len(terms) // 10) :]))
        if tail_block > 1e-3 * max(1.0, abs(total)):
            flags.append("non_convergent")
    clamped = total < 0.0
    if clamped:
        flags.append("negative_sum")
    value = math.sqrt(max(0.0, total)) / len(pts)
    spec = KernelSpec(family, m=m, s=s)
    return DiscrepancyReport(
        kernel=spec,
        n_points=len(pts),
        method="series",
        diagonal_policy=INCLUDE,
        m=m,
        value=value,
        n_max=n_max,
        negative_sum_flag=clamped,
        tail_estimate=tail,
        flags=flags,
    )


def min_generalized_discrepancy(
    pts: PointSet,
    family: str,
    m_range=(0, 1, 2),
    n_max: int = 2000,
    s: float | None = None,
) -> tuple[int, DiscrepancyReport]:
    """Minimize the series score over derivative orders; ties pick smaller m."""
    best_m = None
    best = None
    for m in sorted(set(int(m) for m in m_range)):
        report = series_generalized_discrepancy(pts, family, m, n_max, s)
        if best is None or report.value < best.value:
            best_m, best = m, report
    if best is None:
        raise DomainError("m_range must be non-empty")
    return best_m, best


def measure_inner_product(
    mu: WeightedMeasure, omega: WeightedMeasure, spec: KernelSpec
) -> float:
    """Bilinear form Q(mu, omega) = sum_ij mu_i omega_j K(x_i . y_j)."""
    if is_singular_at_coincidence(spec):
        raise CapabilityError(
            f"{spec.name} is singular at coincidence; use a bounded kernel "
            "such as cui-freeden for measure discrepancies"
        )
    pa, pb = mu.points.points, omega.points.points
    wa, wb = mu.weights, omega.weights
    tspec = spec.with_convention("dot_product_t")

    def row_block(i0: int, i1: int) -> float:
        t = _dot_rows(pa[i0:i1], pb)
        k = np.atleast_2d(kernel_eval(tspec, t))
        return block_sum(k * (wa[i0:i1][:, None] * wb[None, :]))

    return blocked_pair_reduce(pa.shape[0], row_block)


def signed_discrepancy(
    mu: WeightedMeasure, omega: WeightedMeasure, spec: KernelSpec
) -> float:
    """Energy-norm distance sqrt(max(0, Q(mu,mu) + Q(om,om) - 2 Q(mu,om)))."""
    q = (
        measure_inner_product(mu, mu, spec)
        + measure_inner_product(omega, omega, spec)
        - 2.0 * measure_inner_product(mu, omega, spec)
    )
    return math.sqrt(max(0.0, q))
