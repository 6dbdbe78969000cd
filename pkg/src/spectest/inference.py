"""Test statistics on spectral sequence pairs, standardization, and decisions.

The raw statistic accumulates a discrepancy between the unrestricted and
restricted spectral estimates over Fourier frequencies.  Four assembly
forms exist:

* full        sum over every t = 1 .. n//2
* quadratic   same index set, discrepancy fixed to the quadratic one
* block       only every (m+1)-th frequency, so the summands are nearly
              independent and the statistic needs a smaller deflator
* weighted    full sum with a frequency weight phi(lambda_t)

Standardization maps the raw sum to an asymptotically standard normal
variable using the hypothesis constants (eta, sigma^2), the discrepancy
curvature, and for the block form the kernel deflator sqrt(B/D).  The
test is one-sided: large positive values reject.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .divergence import KL, QUADRATIC, Discrepancy, _terms
from .errors import AlignmentMismatch, DegenerateVariance
from .hermitian import relative_eigenvalues_stack
from .hypotheses import EtaSigma
from .spectral import SpectralSequence, WeightKernel, dft, smoothed_periodogram, cvll_select

VALID_FORMS = ("full", "quadratic", "block", "weighted")


@dataclass(frozen=True)
class StatisticVariant:
    """Assembly form plus discrepancy choice.

    kind is ignored by the quadratic form.  The weighted form requires a
    nonnegative weight function phi on [0, pi].
    """

    form: str
    kind: Discrepancy = KL
    phi: object = None

    def __post_init__(self):
        if self.form not in VALID_FORMS:
            raise ValueError(f"unknown statistic form {self.form!r}")
        if self.form == "weighted" and self.phi is None:
            raise ValueError("weighted statistic needs a weight function phi")

    @property
    def effective_kind(self) -> Discrepancy:
        return QUADRATIC if self.form == "quadratic" else self.kind

    @property
    def kind_label(self) -> str:
        return "quadratic" if self.form == "quadratic" else self.kind.label

    @property
    def label(self) -> str:
        if self.form == "quadratic":
            return "quadratic"
        return f"{self.form}-{self.kind_label}"


@dataclass(frozen=True)
class TestReport:
    """Everything a decision consumed, for serialization and diagnostics."""

    raw: float
    m: int
    n: int
    eta_hat: float
    sigma2_hat: float
    standardized: float
    p_value: float
    reject: bool
    alpha_level: float
    nonpd_count: int
    forced_reject: bool


def block_indices(half: int, m: int) -> np.ndarray:
    """1-based frequency indices (t-1)(m+1) + m/2 + 1 for t = 1 .. half//(m+1)."""
    count = half // (m + 1)
    if count < 1:
        raise ValueError(f"span m = {m} leaves no block index below {half}")
    return (m + 1) * np.arange(count) + m // 2 + 1


def raw_statistic(
    fU: SpectralSequence, fR: SpectralSequence, variant: StatisticVariant, m: int | None = None
) -> tuple[float, int]:
    """Accumulate the discrepancy over the variant's index set.

    Indices whose restricted matrix failed the positive-definiteness screen
    contribute nothing and are counted; the decision layer turns a nonzero
    count into a forced rejection.  Returns (raw value, non-PD count).
    """
    if (fU.n, fU.r) != (fR.n, fR.r):
        raise AlignmentMismatch(
            f"sequence mismatch: (n={fU.n}, r={fU.r}) vs (n={fR.n}, r={fR.r})"
        )
    half = fU.half
    if variant.form == "block":
        if m is None:
            raise ValueError("block statistic needs the smoothing span m")
        positions = block_indices(half, m) - 1
    else:
        positions = np.arange(half)
    ok = fR.pd[positions]
    nonpd = int(np.sum(~ok))
    kept = positions[ok]
    if kept.size == 0:
        return 0.0, nonpd
    eigs = relative_eigenvalues_stack(fU.matrices[kept], fR.matrices[kept])
    terms = _terms(variant.effective_kind, eigs)
    if variant.form == "weighted":
        freqs = fU.frequencies[kept]
        terms = terms * np.array([float(variant.phi(lam)) for lam in freqs])
    return float(np.sum(terms)), nonpd


def standardize(
    raw: float,
    n: int,
    m: int,
    es: EtaSigma,
    curvature: float,
    variant: StatisticVariant,
    du: float | None = None,
    bu: float | None = None,
) -> float:
    """Center and scale a raw statistic to its standard normal limit.

    The hypothesis constants are stated for the unit-curvature discrepancy;
    a family with curvature c shifts eta by c and sigma by c (sigma^2 by
    c^2).  The block form additionally deflates by sqrt(B/D) and uses the
    block count L = floor(n//2 / (m+1)) in place of n.
    """
    if es.sigma2 <= 0.0:
        raise DegenerateVariance(f"sigma2 must be positive, got {es.sigma2}")
    if curvature <= 0.0:
        raise ValueError(f"curvature must be positive, got {curvature}")
    eta_k = curvature * es.eta
    sigma_k = curvature * math.sqrt(es.sigma2)
    if variant.form == "block":
        if du is None or bu is None:
            raise ValueError("block standardization needs the kernel constants D and B")
        count = (n // 2) // (m + 1)
        if count < 1:
            raise ValueError(f"span m = {m} leaves no block index for n = {n}")
        deflator = math.sqrt(bu / du)
        return (m / math.sqrt(count)) * (raw - (2.0 * count / m) * eta_k) / (deflator * sigma_k)
    return math.sqrt(m / n) * (raw - (n / m) * eta_k) / sigma_k


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {p}")
    return float(ndtri(p))


def decide(standardized: float, alpha_level: float, forced: bool) -> tuple[float, bool]:
    """One-sided upper-tail p-value and decision.

    p = 1 - Phi(standardized) through the complementary error function.  A
    forced call (non-PD restricted estimate somewhere) rejects with p = 0
    regardless of the statistic's value.
    """
    if not 0.0 < alpha_level < 1.0:
        raise ValueError(f"alpha_level must lie in (0, 1), got {alpha_level}")
    if forced:
        return 0.0, True
    p = 0.5 * math.erfc(standardized / math.sqrt(2.0))
    return p, standardized > normal_quantile(1.0 - alpha_level)


def _scaled_eta_sigma(model, theta, r, kernel: WeightKernel, variant: StatisticVariant,
                      frequencies: np.ndarray) -> EtaSigma:
    """Hypothesis constants adjusted for the kernel and an optional weight.

    The closed forms are stated for the flat kernel (C = 1/2, D = 1/3); a
    general kernel rescales them by (2C, 3D), exactly, because the
    underlying frequency integrands of the built-in hypotheses are
    constants.  For the same reason a weight phi multiplies eta by its
    grid mean and sigma^2 by the mean of its square.
    """
    es = model.eta_sigma_closed(r, theta)
    eta = es.eta * 2.0 * kernel.cu
    sigma2 = es.sigma2 * 3.0 * kernel.du
    if variant.form == "weighted":
        phi_vals = np.array([float(variant.phi(lam)) for lam in frequencies])
        eta *= float(np.mean(phi_vals))
        sigma2 *= float(np.mean(phi_vals**2))
    return EtaSigma(eta=eta, sigma2=sigma2)


def run_many(
    sample,
    model,
    kernel,
    variants,
    alpha_level: float = 0.05,
    cvll_grid=None,
) -> dict[str, TestReport]:
    """Shared pipeline for several statistic variants on one sample.

    kernel may be a WeightKernel, an even integer span (flat weights), or
    "cvll" to select the span by cross validation first.  The spectral
    estimates are computed once and reused across variants.
    """
    from .spectral import validate_sample

    arr = validate_sample(sample)
    n = arr.shape[0]
    if n < 8:
        raise ValueError(f"need at least 8 observations, got {n}")
    frame = dft(arr)
    if isinstance(kernel, WeightKernel):
        kern = kernel
    elif kernel == "cvll":
        span, _ = cvll_select(frame, grid=cvll_grid)
        kern = WeightKernel.flat(span)
    else:
        kern = WeightKernel.flat(int(kernel))
    f_unrestricted = smoothed_periodogram(frame, kern)
    theta = model.estimate_theta(arr)
    f_restricted = model.restricted_estimate(f_unrestricted, theta)
    reports = {}
    for variant in variants:
        raw, nonpd = raw_statistic(f_unrestricted, f_restricted, variant, m=kern.m)
        es = _scaled_eta_sigma(
            model, theta, arr.shape[1], kern, variant, f_unrestricted.frequencies
        )
        standardized = standardize(
            raw, n, kern.m, es, variant.effective_kind.curvature, variant,
            du=kern.du, bu=kern.bu,
        )
        forced = nonpd > 0
        p_value, reject = decide(standardized, alpha_level, forced)
        reports[variant.label] = TestReport(
            raw=raw,
            m=kern.m,
            n=n,
            eta_hat=es.eta,
            sigma2_hat=es.sigma2,
            standardized=standardized,
            p_value=p_value,
            reject=reject,
            alpha_level=alpha_level,
            nonpd_count=nonpd,
            forced_reject=forced,
        )
    return reports


def run_test(
    sample,
    model,
    kernel,
    variant: StatisticVariant,
    alpha_level: float = 0.05,
    cvll_grid=None,
) -> TestReport:
    """End-to-end test of one hypothesis with one statistic variant."""
    reports = run_many(sample, model, kernel, [variant], alpha_level, cvll_grid=cvll_grid)
    return reports[variant.label]
