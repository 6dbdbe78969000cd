"""Spectral density estimation on the Fourier grid.

The estimators here all live on the discrete frequencies lambda_j = 2*pi*j/n.
The transform keeps the 1/sqrt(2*pi*n) normalization so that periodogram
ordinates are unbiased for the spectral density matrix up to smoothing bias,
and every indexed quantity is treated as periodic in j with period n, which
for real data is the same as reflecting conjugate-transposed ordinates
through zero.  Smoothing uses an even positive weight function u on
[-1/2, 1/2] sampled at j/m; bandwidth selection minimizes a leave-one-out
Whittle-type cross validation score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .errors import BandwidthTooLarge, EmptyGrid
from .hermitian import DEFAULT_PD_TOL, is_positive_definite

TWO_PI = 2.0 * math.pi


def validate_sample(values) -> np.ndarray:
    """Coerce to an (n, r) float array of finite observations."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise ValueError(f"sample must be 2-d (n, r), got {arr.ndim}-d")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"sample must be nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample contains non-finite values")
    return arr


@dataclass(frozen=True, eq=False)
class FourierFrame:
    """Discrete Fourier transform of a sample on the full frequency grid.

    w[j, a] = (2*pi*n)^(-1/2) * sum_{t=1}^{n} Z[t, a] * exp(i*t*lambda_j),
    with exact conjugate symmetry w[(n - j) % n] = conj(w[j]) enforced.
    """

    w: np.ndarray
    n: int
    r: int


def dft(values) -> FourierFrame:
    """Transform an (n, r) real sample to its normalized DFT frame."""
    arr = validate_sample(values)
    n, r = arr.shape
    # sum_{t=1}^{n} Z_t e^{i t lambda_j} = e^{i lambda_j} * n * ifft(Z)[j]
    spectrum = n * np.fft.ifft(arr, axis=0)
    phase = np.exp(2j * math.pi * np.arange(n) / n)
    w = phase[:, np.newaxis] * spectrum / math.sqrt(TWO_PI * n)
    w[0] = w[0].real
    if n % 2 == 0:
        w[n // 2] = w[n // 2].real
    for j in range(1, (n + 1) // 2):
        w[n - j] = np.conj(w[j])
    return FourierFrame(w=w, n=n, r=r)


def periodogram_at(frame: FourierFrame, j: int) -> np.ndarray:
    """Periodogram matrix I[j] = w[j] w[j]^H at frequency index j (mod n)."""
    wj = frame.w[j % frame.n]
    return np.outer(wj, np.conj(wj))


def periodogram_stack(frame: FourierFrame) -> np.ndarray:
    """All n periodogram matrices as an (n, r, r) complex array."""
    return np.einsum("ja,jb->jab", frame.w, np.conj(frame.w))


def kernel_constants(u, quadrature_points: int = 2048) -> tuple[float, float, float]:
    """Quadrature values of the three weight-function constants.

    For a positive even weight u on [-1/2, 1/2] (zero outside), returns

        C = (1/2) int u^2 / (int u)^2
        D = (1/2) intintint u(x) u(y) u(x+z) u(y+z) dz dx dy / (int u)^4
        B = (int u^2)^2 / int u^4

    The triple integral collapses through the autocorrelation
    rho(z) = int u(x) u(x+z) dx to D = int_0^1 rho(z)^2 dz / (int u)^4,
    which keeps every quadrature panel smooth even when u does not vanish
    at the support edges.  u must accept ndarray arguments.
    """
    if quadrature_points < 64:
        raise ValueError("quadrature_points must be at least 64")
    panels = quadrature_points + (quadrature_points % 2)
    x = np.linspace(-0.5, 0.5, panels + 1)
    ux = _eval_weight(u, x)
    if np.min(ux) <= 0.0:
        raise ValueError("weight function must be strictly positive on [-1/2, 1/2]")
    norm = simpson(ux, x=x)
    second = simpson(ux**2, x=x)
    fourth = simpson(ux**4, x=x)
    cu = 0.5 * second / norm**2
    bu = second**2 / fourth

    z = np.linspace(0.0, 1.0, panels + 1)
    rho = np.empty_like(z)
    for k, zk in enumerate(z):
        xs = np.linspace(-0.5, 0.5 - zk, panels + 1)
        rho[k] = simpson(_eval_weight(u, xs) * _eval_weight(u, xs + zk), x=xs)
    du = simpson(rho**2, x=z) / norm**4
    return float(cu), float(du), float(bu)


def _eval_weight(u, x: np.ndarray) -> np.ndarray:
    vals = np.asarray(u(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.array([float(u(xi)) for xi in x])
    return vals


@dataclass(frozen=True, eq=False)
class WeightKernel:
    """Smoothing weights w_j = u(j/m), j = -m/2 .. m/2, plus the constants of u."""

    m: int
    weights: np.ndarray
    wstar: float
    cu: float
    du: float
    bu: float

    def __post_init__(self):
        if self.m < 2 or self.m % 2 != 0:
            raise ValueError(f"span m must be even and >= 2, got {self.m}")
        if self.weights.shape != (self.m + 1,):
            raise ValueError("weights must have m + 1 entries")
        if np.min(self.weights) <= 0.0:
            raise ValueError("weights must be strictly positive")
        if np.max(np.abs(self.weights - self.weights[::-1])) > 1e-12 * np.max(self.weights):
            raise ValueError("weights must be symmetric about 0")
        if not math.isclose(self.wstar, float(np.sum(self.weights)), rel_tol=1e-12):
            raise ValueError("wstar must equal the weight sum")
        if min(self.cu, self.du, self.bu) <= 0.0:
            raise ValueError("kernel constants must be positive")
        if 2.0 * self.du / self.bu > 1.0 + 1e-9:
            raise ValueError("constants violate 2D/B <= 1; weight function is invalid")

    @classmethod
    def from_function(cls, u, m: int, quadrature_points: int = 2048) -> "WeightKernel":
        if m < 2 or m % 2 != 0:
            raise ValueError(f"span m must be even and >= 2, got {m}")
        offsets = np.arange(-(m // 2), m // 2 + 1)
        weights = _eval_weight(u, offsets / m)
        cu, du, bu = kernel_constants(u, quadrature_points)
        return cls(m=m, weights=weights, wstar=float(np.sum(weights)), cu=cu, du=du, bu=bu)

    @classmethod
    def flat(cls, m: int) -> "WeightKernel":
        """Unweighted moving average over m + 1 ordinates; C = 1/2, D = 1/3, B = 1.

        The constants are exact for the flat weight function, so no
        quadrature is involved.
        """
        if m < 2 or m % 2 != 0:
            raise ValueError(f"span m must be even and >= 2, got {m}")
        weights = np.ones(m + 1)
        return cls(m=m, weights=weights, wstar=float(m + 1), cu=0.5, du=1.0 / 3.0, bu=1.0)


@dataclass(frozen=True, eq=False)
class SpectralSequence:
    """Spectral matrices at lambda_t = 2*pi*t/n for t = 1 .. n//2.

    matrices[t - 1] holds the value at index t; pd[t - 1] records whether it
    passed the positive-definiteness screen at construction.  kind is one of
    "periodogram", "unrestricted", "restricted".
    """

    kind: str
    n: int
    r: int
    matrices: np.ndarray
    pd: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("periodogram", "unrestricted", "restricted"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        half = self.n // 2
        if self.matrices.shape != (half, self.r, self.r):
            raise ValueError(
                f"matrices must have shape ({half}, {self.r}, {self.r}), "
                f"got {self.matrices.shape}"
            )
        if self.pd.shape != (half,):
            raise ValueError("pd flags must align with the frequency grid")
        drift = np.max(np.abs(self.matrices - self.matrices.conj().transpose(0, 2, 1)))
        scale = max(1.0, float(np.max(np.abs(self.matrices))))
        if drift > 1e-10 * scale:
            raise ValueError(f"sequence entries are not Hermitian (drift {drift:.3e})")

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def frequencies(self) -> np.ndarray:
        return TWO_PI * np.arange(1, self.half + 1) / self.n

    @classmethod
    def from_matrices(cls, kind, n, matrices, pd_tol: float = DEFAULT_PD_TOL) -> "SpectralSequence":
        matrices = np.asarray(matrices, dtype=complex)
        matrices = (matrices + matrices.conj().transpose(0, 2, 1)) / 2.0
        return cls(
            kind=kind,
            n=n,
            r=matrices.shape[-1],
            matrices=matrices,
            pd=pd_flags(matrices, tol=pd_tol),
        )


def pd_flags(matrices: np.ndarray, tol: float = DEFAULT_PD_TOL) -> np.ndarray:
    """Positive-definiteness screen for a stack, same rule as is_positive_definite.

    Fast path: one batched Cholesky plus the pivot threshold.  numpy raises as
    soon as any element of the stack fails, in which case we fall back to the
    per-index scalar check.
    """
    count, r = matrices.shape[0], matrices.shape[-1]
    traces = np.trace(matrices, axis1=1, axis2=2).real
    try:
        chol = np.linalg.cholesky(matrices)
    except np.linalg.LinAlgError:
        return np.array([is_positive_definite(m, tol=tol) for m in matrices], dtype=bool)
    pivots = np.real(np.diagonal(chol, axis1=1, axis2=2)) ** 2
    flags = (traces > 0.0) & np.all(pivots > tol * traces[:, np.newaxis] / r, axis=1)
    return flags


def smoothed_periodogram(sample, kernel: WeightKernel, pd_tol: float = DEFAULT_PD_TOL) -> SpectralSequence:
    """Kernel-smoothed periodogram on the half grid t = 1 .. n//2.

    fhat[t] = (1/wstar) * sum_{j=-m/2}^{m/2} w_j I[(t + j) mod n].

    Requires m < n/2 (BandwidthTooLarge otherwise) and m + 1 >= r so the
    estimate has full rank for generic data.
    """
    frame = sample if isinstance(sample, FourierFrame) else dft(sample)
    n, r, m = frame.n, frame.r, kernel.m
    if 2 * m >= n:
        raise BandwidthTooLarge(f"span m = {m} must satisfy m < n/2 = {n / 2}")
    if m + 1 < r:
        raise ValueError(f"span m = {m} too small for dimension r = {r}; need m + 1 >= r")
    half = n // 2
    stack = periodogram_stack(frame)
    offsets = np.arange(-(m // 2), m // 2 + 1)
    idx = (np.arange(1, half + 1)[:, np.newaxis] + offsets[np.newaxis, :]) % n
    smoothed = np.einsum("w,twab->tab", kernel.weights, stack[idx]) / kernel.wstar
    smoothed = (smoothed + smoothed.conj().transpose(0, 2, 1)) / 2.0
    return SpectralSequence(
        kind="unrestricted", n=n, r=r, matrices=smoothed, pd=pd_flags(smoothed, tol=pd_tol)
    )


def leave_out_estimate(frame: FourierFrame, j: int, m: int) -> np.ndarray:
    """Mean of the m periodogram ordinates at offsets -m/2..m/2 excluding 0."""
    n, r = frame.n, frame.r
    if m < 2 or m % 2 != 0:
        raise ValueError(f"span m must be even and >= 2, got {m}")
    if m < r:
        raise ValueError(f"span m = {m} too small for dimension r = {r}")
    if 2 * m >= n:
        raise BandwidthTooLarge(f"span m = {m} must satisfy m < n/2 = {n / 2}")
    offsets = np.concatenate([np.arange(-(m // 2), 0), np.arange(1, m // 2 + 1)])
    idx = (j + offsets) % n
    w = frame.w[idx]
    est = np.einsum("ja,jb->ab", w, np.conj(w)) / m
    return (est + est.conj().T) / 2.0


def cvll_score(sample, m: int, pd_tol: float = DEFAULT_PD_TOL) -> float:
    """Leave-one-out Whittle cross validation score for span m.

    (1/n) * sum_{j=1}^{n//2} [ tr(I[j] G[j]^{-1}) + log det G[j] ]

    where G[j] is the leave-out estimate at j.  Any index whose leave-out
    estimate fails the positive-definiteness screen sends the score to +inf.
    """
    frame = sample if isinstance(sample, FourierFrame) else dft(sample)
    n, r = frame.n, frame.r
    if m < 2 or m % 2 != 0:
        raise ValueError(f"span m must be even and >= 2, got {m}")
    if m < r:
        raise ValueError(f"span m = {m} too small for dimension r = {r}")
    if 2 * m >= n:
        raise BandwidthTooLarge(f"span m = {m} must satisfy m < n/2 = {n / 2}")
    half = n // 2
    offsets = np.concatenate([np.arange(-(m // 2), 0), np.arange(1, m // 2 + 1)])
    idx = (np.arange(1, half + 1)[:, np.newaxis] + offsets[np.newaxis, :]) % n
    w = frame.w
    gathered = w[idx]
    leave_out = np.einsum("tja,tjb->tab", gathered, np.conj(gathered)) / m
    leave_out = (leave_out + leave_out.conj().transpose(0, 2, 1)) / 2.0
    if not np.all(pd_flags(leave_out, tol=pd_tol)):
        return math.inf
    eigs = np.linalg.eigvalsh(leave_out)
    logdets = np.sum(np.log(eigs), axis=1)
    wt = w[1 : half + 1]
    solved = np.linalg.solve(leave_out, wt[:, :, np.newaxis])[:, :, 0]
    quads = np.real(np.einsum("ta,ta->t", np.conj(wt), solved))
    return float((np.sum(quads) + np.sum(logdets)) / n)


def default_cvll_grid(n: int, r: int) -> list[int]:
    """All even spans m with max(r, ceil(n^0.4)) <= m <= floor(n^0.8), m < n/2."""
    lo = max(r, int(math.ceil(n**0.4 - 1e-9)), 2)
    hi = min(int(math.floor(n**0.8 + 1e-9)), (n - 1) // 2)
    start = lo + (lo % 2)
    grid = list(range(start, hi + 1, 2))
    if not grid:
        raise EmptyGrid(f"no even candidate spans in [{lo}, {hi}] for n = {n}, r = {r}")
    return grid


def cvll_select(sample, grid=None, pd_tol: float = DEFAULT_PD_TOL) -> tuple[int, list[tuple[int, float]]]:
    """Pick the span minimizing the cross validation score; ties go small.

    Returns (best span, [(span, score), ...] over the full grid).
    """
    frame = sample if isinstance(sample, FourierFrame) else dft(sample)
    if grid is None:
        grid = default_cvll_grid(frame.n, frame.r)
    grid = sorted(int(m) for m in grid)
    if not grid:
        raise EmptyGrid("candidate grid is empty")
    scores = [(m, cvll_score(frame, m, pd_tol=pd_tol)) for m in grid]
    best_m, best = scores[0]
    for m, score in scores[1:]:
        if score < best:
            best_m, best = m, score
    return best_m, scores
