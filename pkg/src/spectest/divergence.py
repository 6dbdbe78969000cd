"""Matrix discrepancy measures evaluated on relative eigenvalue spectra.

Each measure compares a Hermitian positive definite matrix M against the
identity through the eigenvalues of the pencil; M itself never appears,
only its relative eigenvalues.  All measures vanish iff every eigenvalue
is 1, are nonnegative, and behave near the identity like

    K(I + E) ~ (c/2) * tr(E^2)

for a measure-specific curvature constant c.  Dividing by c puts every
measure on the same local scale, which is what the standardization of the
test statistics uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveEigenvalue

VALID_FAMILIES = ("kl", "j", "chernoff", "quadratic")


@dataclass(frozen=True)
class Discrepancy:
    """A discrepancy family plus its parameter.

    family : one of "kl", "j", "chernoff", "quadratic"
    alpha  : mixing weight in (0, 1), used by "chernoff" only
    """

    family: str
    alpha: float = 0.5

    def __post_init__(self):
        if self.family not in VALID_FAMILIES:
            raise ValueError(f"unknown discrepancy family {self.family!r}")
        if self.family == "chernoff" and not 0.0 < self.alpha < 1.0:
            raise ValueError(f"chernoff weight must lie in (0, 1), got {self.alpha}")

    @property
    def curvature(self) -> float:
        """Quadratic coefficient c in K(I + E) ~ (c/2) tr(E^2)."""
        if self.family == "j":
            return 2.0
        if self.family == "chernoff":
            return self.alpha * (1.0 - self.alpha)
        return 1.0

    @property
    def label(self) -> str:
        if self.family == "chernoff":
            return f"chernoff({self.alpha:g})"
        return self.family


KL = Discrepancy("kl")
J = Discrepancy("j")
QUADRATIC = Discrepancy("quadratic")


def chernoff(alpha: float) -> Discrepancy:
    return Discrepancy("chernoff", alpha)


def discrepancy(kind: Discrepancy, eigs) -> float:
    """Evaluate one discrepancy on a vector of relative eigenvalues.

    eigs must be strictly positive; NonPositiveEigenvalue is raised
    otherwise, since log and reciprocal terms are undefined at zero.
    """
    lam = np.asarray(eigs, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("eigs must be a nonempty 1-d array")
    if np.any(lam <= 0.0):
        raise NonPositiveEigenvalue(
            f"relative eigenvalues must be positive, got min {lam.min():.3e}"
        )
    return float(_terms(kind, lam[np.newaxis, :])[0])


def _terms(kind: Discrepancy, lam: np.ndarray) -> np.ndarray:
    """Row-wise discrepancy values for a (t, r) eigenvalue array.

    Internal fast path shared with the statistic assembler.  Zero or
    negative eigenvalues produce +inf (the limiting value) rather than an
    exception, so a degenerate spectral estimate turns into a certain
    rejection instead of a crash.
    """
    r = lam.shape[1]
    if kind.family == "quadratic":
        return 0.5 * np.sum((lam - 1.0) ** 2, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_lam = np.log(lam)
        if kind.family == "kl":
            vals = np.sum(lam - log_lam, axis=1) - r
        elif kind.family == "j":
            vals = np.sum(lam + 1.0 / lam, axis=1) - 2.0 * r
        else:
            a = kind.alpha
            # a*(lam-1)+1 rather than a*lam+1-a: exact zero at lam = 1
            vals = np.sum(np.log(a * (lam - 1.0) + 1.0) - a * log_lam, axis=1)
    vals = np.where(np.any(lam <= 0.0, axis=1), np.inf, vals)
    return vals
