"""Null-hypothesis models for the spectral density matrix.

A hypothesis is a constraint map y -> g(theta, y) acting on Hermitian PD
matrices, applied frequency by frequency to the unrestricted spectral
estimate.  Three hypotheses are built in:

* independence     g(y) = diag(y_11, ..., y_rr); the series are mutually
                   independent iff the spectral matrix is diagonal at every
                   frequency.
* separable        g(theta, y) = (1/r) (sum_a y_aa / sigma_aa) * Sigma with
                   theta = Sigma, a constant cross-sectional covariance
                   times one common spectral shape.
* graphical        entries on an edge set are kept, inverse entries off it
                   are forced to zero (conditional independence given the
                   remaining series), realized by covariance-selection
                   completion.

Each model also knows the centering and scaling constants (eta, sigma^2)
that standardize the test statistics, either in closed form or through the
generic contraction engine `eta_sigma_generic`, which integrates the
second-derivative tensor of the discrepancy against the null spectrum over
the frequency grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateVariance,
    NoConvergence,
    NotPositiveDefinite,
    SingularCovariance,
)
from .hermitian import as_hermitian, inverse_pd, is_positive_definite
from .spectral import SpectralSequence, WeightKernel, pd_flags

FLAT_CU = 0.5
FLAT_DU = 1.0 / 3.0


@dataclass(frozen=True)
class EtaSigma:
    """Centering constant eta and variance constant sigma^2 (both per frequency)."""

    eta: float
    sigma2: float

    def __post_init__(self):
        if not np.isfinite(self.eta):
            raise ValueError(f"eta must be finite, got {self.eta}")
        if not (np.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise DegenerateVariance(f"sigma2 must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class EdgeSet:
    """Undirected edge set on r series; absent pairs are the constraints.

    Pairs are 0-based and stored with a < b.  Diagonal pairs are implicit.
    missing_count is the number of absent off-diagonal pairs.
    """

    r: int
    edges: frozenset

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"edge set needs r >= 2, got r = {self.r}")
        for pair in self.edges:
            a, b = pair
            if not (0 <= a < b < self.r):
                raise ValueError(f"invalid edge {pair} for r = {self.r}")

    @classmethod
    def from_pairs(cls, r: int, pairs) -> "EdgeSet":
        normalized = frozenset((min(a, b), max(a, b)) for a, b in pairs)
        return cls(r=r, edges=normalized)

    @property
    def missing_count(self) -> int:
        return self.r * (self.r - 1) // 2 - len(self.edges)

    @property
    def absent_pairs(self) -> list[tuple[int, int]]:
        return [
            (a, b)
            for a in range(self.r)
            for b in range(a + 1, self.r)
            if (a, b) not in self.edges
        ]


def parse_edge_list(text: str, r: int) -> EdgeSet:
    """Parse the CLI edge syntax "1-2,2-3" (1-based indices) into an EdgeSet."""
    pairs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split("-")
        if len(parts) != 2:
            raise ValueError(f"bad edge token {token!r}, expected like '1-2'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"bad edge token {token!r}: indices must be integers") from exc
        if not (1 <= a <= r and 1 <= b <= r) or a == b:
            raise ValueError(f"edge {token!r} out of range for r = {r}")
        pairs.append((a - 1, b - 1))
    return EdgeSet.from_pairs(r, pairs)


def covariance_selection(h, edges: EdgeSet, tol: float = 1e-10, max_iter: int = 1000) -> np.ndarray:
    """Complete a Hermitian PD matrix so its inverse vanishes off the edge set.

    Keeps every diagonal entry and every entry on an edge, and adjusts the
    absent entries until |(G^-1)_ab| <= tol * max|G^-1| for all absent pairs.
    Cyclic scheme over absent pairs: setting
        G_ab = G_{a,R} G_{R,R}^{-1} G_{R,b},   R = indices other than a, b,
    zeroes the (a,b) entry of the inverse exactly (the 2x2 Schur complement
    of the pair becomes diagonal) and preserves positive definiteness, so
    each sweep is a sequence of exact single-pair solutions.

    Raises NotPositiveDefinite on invalid input and NoConvergence if the
    sweep budget is exhausted.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    g = as_hermitian(np.asarray(h, dtype=complex))
    if not is_positive_definite(g):
        raise NotPositiveDefinite("covariance selection needs a positive definite input")
    absent = edges.absent_pairs
    if not absent:
        return g
    r = g.shape[0]
    everything = np.arange(r)
    for _ in range(max_iter):
        for a, b in absent:
            rest = everything[(everything != a) & (everything != b)]
            if rest.size == 0:
                g[a, b] = 0.0
                g[b, a] = 0.0
                continue
            block = g[np.ix_(rest, rest)]
            solved = np.linalg.solve(block, g[rest, b])
            value = g[a, rest] @ solved
            g[a, b] = value
            g[b, a] = np.conj(value)
        inv = inverse_pd(g)
        off = max(abs(inv[a, b]) for a, b in absent)
        if off <= tol * np.max(np.abs(inv)):
            return g
    raise NoConvergence(
        f"covariance selection did not reach tol {tol:g} in {max_iter} sweeps"
    )


def mu_tensor(g_val, g_inv, dg) -> np.ndarray:
    """Second-derivative tensor of the discrepancy through the constraint map.

    Parameters
    ----------
    g_val : (r, r) Hermitian PD value of the null spectral matrix.
    g_inv : (r, r) its inverse.
    dg : (r, r, r, r) array, dg[a, b] = derivative of the constraint map
        with respect to entry (a, b) of its matrix argument.

    Returns the (r, r, r, r) complex array

        mu[a,b,c,d] = 1/2 tr[D_ab G D_cd G] - 1/2 [G D_ab G]_{dc}
                      - 1/2 [G D_cd G]_{ba} + 1/2 G_{bc} G_{da}

    with G = g_inv and D = dg.
    """
    g_inv = np.asarray(g_inv, dtype=complex)
    dg = np.asarray(dg, dtype=complex)
    r = g_inv.shape[0]
    if dg.shape != (r, r, r, r):
        raise ValueError(f"dg must have shape {(r, r, r, r)}, got {dg.shape}")
    term1 = 0.5 * np.einsum("abij,jk,cdkl,li->abcd", dg, g_inv, dg, g_inv, optimize=True)
    term2 = -0.5 * np.einsum("di,abij,jc->abcd", g_inv, dg, g_inv, optimize=True)
    term3 = -0.5 * np.einsum("bi,cdij,ja->abcd", g_inv, dg, g_inv, optimize=True)
    term4 = 0.5 * np.einsum("bc,da->abcd", g_inv, g_inv)
    return term1 + term2 + term3 + term4


def eta_sigma_generic(
    g_grid: SpectralSequence,
    dg_provider,
    kernel: WeightKernel | None = None,
    phi=None,
    imag_tol: float = 1e-10,
) -> EtaSigma:
    """eta and sigma^2 by direct contraction over a frequency grid.

    dg_provider(lambda, g_matrix) must return the (r, r, r, r) derivative
    array of the constraint map at that frequency.  The frequency integrals
    are Riemann sums over the grid; with a weight function phi the eta
    integrand picks up phi(lambda) and the sigma^2 integrand phi(lambda)^2.
    kernel supplies the weight-function constants; None means the flat
    kernel's exact values.
    """
    if not np.all(g_grid.pd):
        raise NotPositiveDefinite("eta_sigma_generic needs a PD matrix at every grid point")
    cu = kernel.cu if kernel is not None else FLAT_CU
    du = kernel.du if kernel is not None else FLAT_DU
    freqs = g_grid.frequencies
    mats = g_grid.matrices
    half, r = mats.shape[0], mats.shape[-1]
    mu_all = np.empty((half, r, r, r, r), dtype=complex)
    for t in range(half):
        g = mats[t]
        mu_all[t] = mu_tensor(g, inverse_pd(g), dg_provider(freqs[t], g))
    eta_terms = np.einsum("tabcd,tad,tcb->t", mu_all, mats, mats, optimize=True)
    mu_conj = np.conj(mu_all)
    sigma_terms = np.einsum(
        "tabcd,tABCD,taA,tBb,tcC,tDd->t", mu_all, mu_conj, mats, mats, mats, mats,
        optimize=True,
    )
    sigma_terms = sigma_terms + np.einsum(
        "tabcd,tABCD,taC,tDb,tcA,tBd->t", mu_all, mu_conj, mats, mats, mats, mats,
        optimize=True,
    )
    if phi is not None:
        phi_vals = np.array([float(phi(lam)) for lam in freqs])
        eta_terms = eta_terms * phi_vals
        sigma_terms = sigma_terms * phi_vals**2
    eta_c = cu * np.mean(eta_terms)
    sigma_c = du * np.mean(sigma_terms)
    for name, value in (("eta", eta_c), ("sigma2", sigma_c)):
        if abs(value.imag) > imag_tol * max(1.0, abs(value.real)):
            raise ValueError(f"{name} has a non-negligible imaginary part {value.imag:.3e}")
    return EtaSigma(eta=float(eta_c.real), sigma2=float(sigma_c.real))


class IndependenceModel:
    """Mutual independence: the spectral matrix is diagonal at every frequency."""

    name = "independence"

    def free_parameters(self, r: int) -> int:
        return 0

    def estimate_theta(self, values) -> np.ndarray:
        return np.empty(0)

    def restricted_estimate(self, f_unrestricted: SpectralSequence, theta=None) -> SpectralSequence:
        mats = np.zeros_like(f_unrestricted.matrices)
        idx = np.arange(f_unrestricted.r)
        mats[:, idx, idx] = np.real(f_unrestricted.matrices[:, idx, idx])
        return SpectralSequence(
            kind="restricted",
            n=f_unrestricted.n,
            r=f_unrestricted.r,
            matrices=mats,
            pd=pd_flags(mats),
        )

    def eta_sigma_closed(self, r: int, theta=None) -> EtaSigma:
        return EtaSigma(eta=(r * r - r) / 4.0, sigma2=(r * r - r) / 6.0)

    def derivative_provider(self, r: int, theta=None):
        dg = np.zeros((r, r, r, r), dtype=complex)
        for a in range(r):
            dg[a, a, a, a] = 1.0
        return lambda lam, g: dg


class SeparableModel:
    """Constant covariance times a common scalar spectral shape."""

    name = "separable"

    def free_parameters(self, r: int) -> int:
        return r * r

    def estimate_theta(self, values) -> np.ndarray:
        """Sample second-moment matrix (1/n) sum Z_t Z_t'."""
        arr = np.asarray(values, dtype=float)
        sigma = arr.T @ arr / arr.shape[0]
        sigma = (sigma + sigma.T) / 2.0
        if not is_positive_definite(sigma):
            raise SingularCovariance("sample second-moment matrix is not positive definite")
        return sigma

    def restricted_estimate(self, f_unrestricted: SpectralSequence, theta) -> SpectralSequence:
        sigma = np.asarray(theta, dtype=float)
        diag = np.real(np.diagonal(f_unrestricted.matrices, axis1=1, axis2=2))
        shape = np.mean(diag / np.diag(sigma)[np.newaxis, :], axis=1)
        mats = shape[:, np.newaxis, np.newaxis] * sigma[np.newaxis, :, :].astype(complex)
        return SpectralSequence(
            kind="restricted",
            n=f_unrestricted.n,
            r=f_unrestricted.r,
            matrices=mats,
            pd=pd_flags(mats),
        )

    def eta_sigma_closed(self, r: int, theta) -> EtaSigma:
        sigma = np.asarray(theta, dtype=float)
        d = np.diag(sigma)
        tau = float(np.sum(sigma**2 / np.outer(d, d)))
        return EtaSigma(
            eta=(tau / r - 2.0 + r * r) / 4.0,
            sigma2=(tau**2 / r**2 - 2.0 + r * r) / 6.0,
        )

    def derivative_provider(self, r: int, theta):
        sigma = np.asarray(theta, dtype=complex)
        d = np.real(np.diag(sigma))
        dg = np.zeros((r, r, r, r), dtype=complex)
        for a in range(r):
            dg[a, a] = sigma / (r * d[a])
        return lambda lam, g: dg


class GraphicalModel:
    """Conditional independence off a fixed edge set (covariance selection)."""

    name = "graphical"

    def __init__(self, edges: EdgeSet, tol: float = 1e-10, max_iter: int = 1000):
        if edges.missing_count < 1:
            raise ValueError(
                "complete edge set leaves nothing to test; at least one pair must be absent"
            )
        self.edges = edges
        self.tol = tol
        self.max_iter = max_iter

    def free_parameters(self, r: int) -> int:
        return 0

    def estimate_theta(self, values) -> np.ndarray:
        return np.empty(0)

    def restricted_estimate(self, f_unrestricted: SpectralSequence, theta=None) -> SpectralSequence:
        half = f_unrestricted.half
        mats = np.array(f_unrestricted.matrices, copy=True)
        solved = np.zeros(half, dtype=bool)
        for t in range(half):
            if not f_unrestricted.pd[t]:
                continue
            try:
                mats[t] = covariance_selection(
                    mats[t], self.edges, tol=self.tol, max_iter=self.max_iter
                )
                solved[t] = True
            except (NotPositiveDefinite, NoConvergence):
                pass
        return SpectralSequence(
            kind="restricted",
            n=f_unrestricted.n,
            r=f_unrestricted.r,
            matrices=mats,
            pd=solved & pd_flags(mats),
        )

    def eta_sigma_closed(self, r: int, theta=None) -> EtaSigma:
        m_absent = self.edges.missing_count
        return EtaSigma(eta=m_absent / 2.0, sigma2=m_absent / 3.0)

    def derivative_provider(self, r: int, theta=None):
        raise ValueError(
            "the graphical constraint map is implicit; closed-form eta/sigma only"
        )


def model_from_name(name: str, r: int | None = None, edges: str | EdgeSet | None = None):
    """Build a hypothesis model from its CLI name."""
    key = name.strip().lower()
    if key == "independence":
        return IndependenceModel()
    if key == "separable":
        return SeparableModel()
    if key == "graphical":
        if edges is None:
            raise ValueError("graphical hypothesis needs an edge list")
        if isinstance(edges, EdgeSet):
            return GraphicalModel(edges)
        if r is None:
            raise ValueError("graphical hypothesis needs the series count to parse edges")
        return GraphicalModel(parse_edge_list(edges, r))
    raise ValueError(f"unknown hypothesis {name!r}")
