import math

import numpy as np
import pytest

from sphereq.errors import CapabilityError, DomainError, SingularKernelError
from sphereq.kernels import (
    CHORDAL,
    KernelSpec,
    SymbolSequence,
    is_singular_at_coincidence,
    kernel_derivative,
    kernel_eval,
    kernel_series_eval,
    kernel_t_derivative,
    kernel_uniform_mean,
    parse_kernel,
    symbol_squared,
)

PYCKE = KernelSpec("pycke")
CF = KernelSpec("cui-freeden")
FOUR_PI = 4.0 * math.pi


def affine_calibration(series_fn, closed_fn, probes=(-0.5, 0.0, 0.5)):
    """Least-squares fit closed ~ a*series + b on a few probe arguments."""
    s = np.array([series_fn(t) for t in probes])
    c = np.array([closed_fn(t) for t in probes])
    design = np.column_stack([s, np.ones_like(s)])
    (a, b), *_ = np.linalg.lstsq(design, c, rcond=None)
    return a, b


# --- closed forms -----------------------------------------------------------

def test_pycke_zero_of_log():
    assert kernel_eval(PYCKE, 1.0 - 2.0 / math.e) == pytest.approx(0.0, abs=1e-15)


def test_cui_freeden_at_coincidence():
    assert kernel_eval(CF, 1.0) == 1.0


def test_pycke_at_antipode():
    assert kernel_eval(PYCKE, -1.0) == pytest.approx(-1.0 / FOUR_PI, rel=1e-14)


def test_cui_freeden_value():
    expect = 1.0 - 2.0 * math.log(1.0 + math.sqrt(2.0 / 3.0))
    assert kernel_eval(CF, -1.0 / 3.0) == pytest.approx(expect, rel=1e-14)
    assert expect == pytest.approx(-0.193819, abs=1e-6)


def test_riesz_closed_form():
    assert kernel_eval(KernelSpec("riesz", s=1.0), 0.5) == pytest.approx(1.0, rel=1e-14)


def test_gine_ajne_closed_forms():
    t = 0.3
    gine = 0.5 - (2.0 / math.pi) * math.sin(math.acos(t))
    ajne = 0.25 - math.acos(t) / (2.0 * math.pi)
    assert kernel_eval(KernelSpec("gine"), t) == pytest.approx(gine, rel=1e-14)
    assert kernel_eval(KernelSpec("ajne"), t) == pytest.approx(ajne, rel=1e-14)


def test_singularity_errors_carry_kernel_name():
    with pytest.raises(SingularKernelError) as err:
        kernel_eval(PYCKE, 1.0)
    assert "pycke" in str(err.value)
    with pytest.raises(SingularKernelError):
        kernel_eval(KernelSpec("riesz", s=1.0), 1.0)
    with pytest.raises(SingularKernelError):
        kernel_eval(KernelSpec("riesz", s=0.0), 1.0)


def test_riesz_negative_exponent_is_bounded():
    assert kernel_eval(KernelSpec("riesz", s=-1.0), 1.0) == pytest.approx(0.0)


def test_domain_validation():
    with pytest.raises(DomainError):
        kernel_eval(PYCKE, 1.5)
    with pytest.raises(DomainError):
        kernel_eval(PYCKE.with_convention(CHORDAL), -0.2)
    with pytest.raises(DomainError):
        KernelSpec("riesz")  # missing exponent
    with pytest.raises(DomainError):
        KernelSpec("pycke", s=1.0)


# --- derivative kernels -----------------------------------------------------

def test_pycke_derivative_chain():
    d1 = kernel_derivative(PYCKE)
    assert d1.m == 1
    assert kernel_eval(d1, 0.0) == pytest.approx(1.0, rel=1e-14)
    d2 = kernel_derivative(d1)
    assert kernel_eval(d2, -1.0) == pytest.approx(0.25, rel=1e-14)
    with pytest.raises(CapabilityError):
        kernel_derivative(d2)


def test_cui_freeden_first_derivative_form():
    d1 = kernel_derivative(CF)
    u = math.sqrt((1.0 - 0.2) / 2.0)
    assert kernel_eval(d1, 0.2) == pytest.approx(1.0 / (1.0 + u), rel=1e-14)


def test_cui_freeden_chordal_taylor_derivatives():
    # |dK/dr| and |d2K/dr2|/2! of K(r) = 1 - 2 ln(1 + r/2), by central differences
    spec1 = KernelSpec("cui-freeden", m=1, convention=CHORDAL)
    spec2 = KernelSpec("cui-freeden", m=2, convention=CHORDAL)
    base = KernelSpec("cui-freeden", convention=CHORDAL)
    h1, h2 = 1e-6, 1e-4
    for r in np.linspace(0.1, 1.9, 13):
        fd1 = (kernel_eval(base, r + h1) - kernel_eval(base, r - h1)) / (2 * h1)
        assert -fd1 == pytest.approx(kernel_eval(spec1, r), rel=1e-8)
        fd2 = (
            kernel_eval(base, r + h2)
            - 2 * kernel_eval(base, r)
            + kernel_eval(base, r - h2)
        ) / h2**2
        assert fd2 / 2.0 == pytest.approx(kernel_eval(spec2, r), rel=1e-5)


def test_lemma_family_finite_difference():
    # central difference of the m=0 form matches the m=1 kernel up to one
    # global positive constant (1/4pi here), relative error < 1e-6
    h = 1e-5
    ts = np.linspace(-0.9, 0.9, 37)
    fd = (kernel_eval(PYCKE, ts + h) - kernel_eval(PYCKE, ts - h)) / (2 * h)
    ratio = fd / kernel_eval(KernelSpec("pycke", m=1), ts)
    scale = ratio[len(ratio) // 2]
    assert scale > 0
    assert np.max(np.abs(ratio / scale - 1.0)) < 1e-6


def test_riesz_zero_matches_pycke_affine():
    r0 = KernelSpec("riesz", s=0.0)
    ts = np.linspace(-0.9, 0.9, 25)
    a = np.asarray(kernel_eval(r0, ts))
    b = np.asarray(kernel_eval(PYCKE, ts))
    design = np.column_stack([a, np.ones_like(a)])
    (slope, inter), *_ = np.linalg.lstsq(design, b, rcond=None)
    assert slope == pytest.approx(1.0 / FOUR_PI, rel=1e-10)
    assert inter == pytest.approx((2 * math.log(2) - 1) / FOUR_PI, rel=1e-8)
    fit = slope * a + inter
    assert np.max(np.abs(fit - b)) < 1e-12


def test_argument_convention_coherence_exact():
    specs = [
        PYCKE, KernelSpec("pycke", m=1), KernelSpec("pycke", m=2),
        CF, KernelSpec("cui-freeden", m=1), KernelSpec("cui-freeden", m=2),
        KernelSpec("gine"), KernelSpec("ajne"),
        KernelSpec("riesz", s=1.0), KernelSpec("riesz", s=0.0),
        KernelSpec("riesz", s=-1.0),
    ]
    ts = np.linspace(-0.999, 0.999, 101)
    rs = np.sqrt(2.0 * (1.0 - ts))
    for spec in specs:
        dot = np.asarray(kernel_eval(spec, ts))
        chord = np.asarray(kernel_eval(spec.with_convention(CHORDAL), rs))
        assert np.array_equal(dot, chord), spec.name


def test_kernel_name_round_trip():
    for name in ("pycke", "pycke:d2", "cui-freeden:d1", "gine", "ajne",
                 "riesz:s=1", "riesz:s=1:d1", "riesz:s=0.5"):
        assert parse_kernel(name).name == name
    with pytest.raises(DomainError):
        parse_kernel("mystery")


def test_uniform_means():
    assert kernel_uniform_mean(CF) == 0.0
    assert kernel_uniform_mean(PYCKE) == 0.0
    assert kernel_uniform_mean(KernelSpec("gine")) == 0.0
    assert kernel_uniform_mean(KernelSpec("riesz", s=1.0)) == pytest.approx(1.0)
    assert kernel_uniform_mean(KernelSpec("cui-freeden", m=1)) == pytest.approx(
        2.0 - 2.0 * math.log(2.0)
    )
    assert kernel_uniform_mean(KernelSpec("cui-freeden", m=2)) == pytest.approx(
        0.25 * (2.0 * math.log(2.0) - 1.0)
    )
    with pytest.raises(CapabilityError):
        kernel_uniform_mean(KernelSpec("riesz", s=2.5))


def test_uniform_means_match_quadrature():
    # E[K] = (1/2) int_{-1}^{1} K(t) dt for uniform pairs
    from scipy.integrate import quad

    for spec in (CF, KernelSpec("cui-freeden", m=1), KernelSpec("cui-freeden", m=2),
                 KernelSpec("riesz", s=1.0), KernelSpec("gine"), KernelSpec("ajne")):
        val, _ = quad(lambda t: kernel_eval(spec, t), -1.0, 1.0,
                      points=[1.0], limit=300)
        assert 0.5 * val == pytest.approx(kernel_uniform_mean(spec), abs=1e-9)


def test_shifted_riesz_is_centered():
    spec = KernelSpec("riesz", s=1.0, shifted=True)
    raw = KernelSpec("riesz", s=1.0)
    t = 0.3
    assert kernel_eval(spec, t) == pytest.approx(
        kernel_eval(raw, t) - kernel_uniform_mean(raw), rel=1e-14
    )
    with pytest.raises(CapabilityError):
        KernelSpec("riesz", s=2.5, shifted=True)


# --- spectral symbols -------------------------------------------------------

def test_symbol_values():
    assert symbol_squared("pycke", 3) == 12.0
    assert symbol_squared("cui-freeden", 2) == 30.0
    assert symbol_squared("gine", 5) is None
    assert symbol_squared("ajne", 4) is None


def test_riesz_symbol_coulomb_case():
    # s = 1 reduces to (2n+1)/(4pi)
    for n in (1, 2, 7, 40):
        assert symbol_squared("riesz", n, s=1.0) == pytest.approx(
            (2 * n + 1) / FOUR_PI, rel=1e-12
        )
    assert symbol_squared("riesz", 3, s=0.0) == pytest.approx(12.0 / FOUR_PI)


def test_symbol_positivity_and_parity():
    for family in ("pycke", "cui-freeden", "gine", "ajne"):
        seq = SymbolSequence(family)
        for n in range(1, 201):
            val = seq.value(n)
            if family == "gine" and n % 2 == 1:
                assert val is None
            elif family == "ajne" and n % 2 == 0:
                assert val is None
            else:
                assert val is not None and val > 0.0
    seq = SymbolSequence("riesz", s=1.5)
    assert all(seq.value(n) > 0 for n in range(1, 201))


# --- truncated series -------------------------------------------------------

def test_series_matches_pycke_closed_form():
    got = kernel_series_eval("pycke", 0, 0.0, 5000)
    expect = -(1.0 - math.log(2.0)) / FOUR_PI
    assert expect == pytest.approx(-0.024418, abs=1e-6)
    assert got.value == pytest.approx(expect, abs=1e-3)
    assert got.tail_estimate < 1e-5


def test_series_telescopes_after_calibration():
    # raw series carries 1/(4pi); the affine calibration recovers the
    # closed-form convention, and the calibrated value at t=1 is the
    # telescoped sum 1 - 1/(n_max + 1) ~ 1
    a, b = affine_calibration(
        lambda t: kernel_series_eval("cui-freeden", 0, t, 10000).value,
        lambda t: kernel_eval(CF, t),
    )
    assert a == pytest.approx(FOUR_PI, rel=1e-3)
    mapped = a * kernel_series_eval("cui-freeden", 0, 1.0, 10000).value + b
    assert mapped == pytest.approx(1.0, abs=1e-3)


def test_series_empty_sum():
    got = kernel_series_eval("gine", 0, 0.3, 1)
    assert got.value == 0.0 and got.tail_estimate == 0.0


def test_series_closed_form_agreement_on_grid():
    for family, closed in (("pycke", PYCKE), ("cui-freeden", CF)):
        a, b = affine_calibration(
            lambda t: kernel_series_eval(family, 0, t, 5000).value,
            lambda t: kernel_eval(closed, t),
        )
        ts = np.linspace(-0.95, 0.95, 39)
        series = kernel_series_eval(family, 0, ts, 5000).value
        closed_vals = np.asarray(kernel_eval(closed, ts))
        assert np.max(np.abs(a * series + b - closed_vals)) < 1e-3


def test_t_derivative_by_finite_differences():
    h = 1e-6
    for spec in (PYCKE, CF, KernelSpec("cui-freeden", m=1),
                 KernelSpec("riesz", s=1.0), KernelSpec("riesz", s=0.0)):
        for t in (-0.8, -0.2, 0.4, 0.8):
            fd = (kernel_eval(spec, t + h) - kernel_eval(spec, t - h)) / (2 * h)
            assert kernel_t_derivative(spec, t) == pytest.approx(fd, rel=1e-7)


def test_is_singular_catalog():
    assert is_singular_at_coincidence(PYCKE)
    assert is_singular_at_coincidence(KernelSpec("riesz", s=1.0))
    assert is_singular_at_coincidence(KernelSpec("riesz", s=0.0))
    assert not is_singular_at_coincidence(KernelSpec("riesz", s=-1.0))
    assert not is_singular_at_coincidence(CF)
    assert not is_singular_at_coincidence(KernelSpec("cui-freeden", m=2))
    assert is_singular_at_coincidence(KernelSpec("gine", m=1))
    assert not is_singular_at_coincidence(KernelSpec("gine"))
