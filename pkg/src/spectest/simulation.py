"""Gaussian VAR(1) simulation and Monte Carlo calibration of the tests.

The benchmark design is a three-dimensional first-order autoregression
with an upper-triangular coefficient matrix

    [[0.7, phi, 0.0],
     [0.0, -0.5, phi],
     [0.0, 0.0, 0.6]]

and standard Gaussian innovations.  Its eigenvalues are fixed at
{0.7, -0.5, 0.6} whatever phi is, so the process stays stationary, and the
three series are mutually independent exactly when phi = 0.  Null
summaries estimate the moments, upper quantile, and rejection rate of the
standardized statistics over independent replications; power studies use
the empirical null quantile as the critical value (size-adjusted power).

Replication k of a run seeded with s draws from the dedicated stream
SeedSequence(s, spawn_key=(k,)), so results do not depend on execution
order or worker count.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NonStationary
from .hermitian import is_positive_definite
from .inference import normal_quantile, run_many


@dataclass(frozen=True, eq=False)
class VarOneProcess:
    """First-order vector autoregression Z_t = A Z_{t-1} + eps_t."""

    a: np.ndarray
    innovation_cov: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got shape {a.shape}")
        object.__setattr__(self, "a", a)
        if self.spectral_radius >= 1.0:
            raise NonStationary(
                f"spectral radius {self.spectral_radius:.4f} >= 1; the process has no stationary law"
            )
        if self.innovation_cov is not None:
            cov = np.asarray(self.innovation_cov, dtype=float)
            if cov.shape != a.shape:
                raise ValueError("innovation covariance must match the coefficient matrix")
            if not is_positive_definite(cov):
                raise ValueError("innovation covariance must be positive definite")
            object.__setattr__(self, "innovation_cov", cov)

    @property
    def r(self) -> int:
        return self.a.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.a))))


def benchmark_process(phi: float) -> VarOneProcess:
    """The built-in 3-series benchmark; independent components iff phi = 0."""
    a = np.array(
        [
            [0.7, phi, 0.0],
            [0.0, -0.5, phi],
            [0.0, 0.0, 0.6],
        ]
    )
    return VarOneProcess(a=a)


def replication_seed(seed: int, k: int) -> np.random.SeedSequence:
    """Deterministic independent stream for replication k of a run."""
    return np.random.SeedSequence(seed, spawn_key=(k,))


def simulate_var1(process: VarOneProcess, n: int, burn_in: int = 1000, seed=None) -> np.ndarray:
    """Simulate n observations after discarding burn_in steps from Z_0 = 0."""
    if n < 8:
        raise ValueError(f"need n >= 8, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be nonnegative, got {burn_in}")
    rng = np.random.default_rng(seed)
    r = process.r
    total = burn_in + n
    eps = rng.standard_normal((total, r))
    if process.innovation_cov is not None:
        eps = eps @ np.linalg.cholesky(process.innovation_cov).T
    out = np.empty((total, r))
    a = process.a
    state = np.zeros(r)
    for t in range(total):
        state = a @ state + eps[t]
        out[t] = state
    return out[burn_in:]


@dataclass(frozen=True, eq=False)
class McConfig:
    """One Monte Carlo run: process, sample design, hypothesis, statistics."""

    process: VarOneProcess
    n: int
    bandwidth: object  # even integer span, or "cvll"
    model: object
    variants: tuple
    replications: int
    seed: int
    burn_in: int = 1000
    alpha_level: float = 0.05
    cvll_grid: tuple | None = None

    def __post_init__(self):
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "cvll":
                raise ValueError(f"bandwidth must be an even integer or 'cvll', got {self.bandwidth!r}")
        elif int(self.bandwidth) % 2 != 0:
            raise ValueError(f"bandwidth must be even, got {self.bandwidth}")
        if self.replications < 1:
            raise ValueError("replications must be positive")
        if not self.variants:
            raise ValueError("at least one statistic variant is required")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.variants)


@dataclass(frozen=True)
class McSummary:
    """Moments, upper quantile, and rejection rate of a standardized statistic.

    kurtosis is the plain (non-excess) fourth standardized moment, limit 3.
    rejection_rate is the empirical size under a null configuration and the
    power under an alternative one.
    """

    mean: float
    variance: float
    skewness: float
    kurtosis: float
    q95: float
    rejection_rate: float
    replications: int


def _replicate(config: McConfig, k: int) -> dict[str, tuple[float, bool]]:
    sample = simulate_var1(
        config.process, config.n, burn_in=config.burn_in, seed=replication_seed(config.seed, k)
    )
    reports = run_many(
        sample,
        config.model,
        config.bandwidth if config.bandwidth == "cvll" else int(config.bandwidth),
        config.variants,
        alpha_level=config.alpha_level,
        cvll_grid=config.cvll_grid,
    )
    return {label: (rep.standardized, rep.forced_reject) for label, rep in reports.items()}


def _replicate_task(args) -> dict[str, tuple[float, bool]]:
    return _replicate(*args)


def _collect(config: McConfig, threads: int) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Standardized values and forced flags per variant, ordered by replication."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    tasks = ((config, k) for k in range(config.replications))
    if threads == 1:
        results = [_replicate(config, k) for k in range(config.replications)]
    else:
        chunk = max(1, config.replications // (threads * 8))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate_task, tasks, chunksize=chunk))
    out = {}
    for label in config.labels:
        values = np.array([res[label][0] for res in results])
        forced = np.array([res[label][1] for res in results], dtype=bool)
        out[label] = (values, forced)
    return out


def _summarize(values: np.ndarray, forced: np.ndarray, alpha_level: float) -> McSummary:
    count = values.size
    mean = float(np.mean(values))
    centered = values - mean
    m2 = float(np.mean(centered**2))
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    critical = normal_quantile(1.0 - alpha_level)
    return McSummary(
        mean=mean,
        variance=float(np.sum(centered**2) / (count - 1)),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / m2**2,
        q95=float(np.quantile(values, 0.95)),
        rejection_rate=float(np.mean(forced | (values > critical))),
        replications=count,
    )


def null_summary(config: McConfig, threads: int = 1) -> dict[str, McSummary]:
    """Null-distribution summaries per variant over independent replications."""
    if config.replications < 100:
        raise ValueError("summary outputs need at least 100 replications")
    collected = _collect(config, threads)
    return {
        label: _summarize(values, forced, config.alpha_level)
        for label, (values, forced) in collected.items()
    }


def size_adjusted_power(
    null_config: McConfig, alt_config: McConfig, threads: int = 1
) -> dict[str, float]:
    """Rejection rate under the alternative at the empirical null critical value.

    The critical value per variant is the (1 - alpha) quantile of the
    standardized statistic under null_config; the two configurations must
    share the sample design and statistic set.
    """
    if null_config.labels != alt_config.labels:
        raise ValueError("configurations must run the same statistic variants")
    if (null_config.n, null_config.bandwidth) != (alt_config.n, alt_config.bandwidth):
        raise ValueError("configurations must share n and the bandwidth rule")
    if min(null_config.replications, alt_config.replications) < 100:
        raise ValueError("summary outputs need at least 100 replications")
    null_runs = _collect(null_config, threads)
    alt_runs = _collect(alt_config, threads)
    powers = {}
    for label in null_config.labels:
        null_values, _ = null_runs[label]
        critical = float(np.quantile(null_values, 1.0 - null_config.alpha_level))
        values, forced = alt_runs[label]
        powers[label] = float(np.mean(forced | (values > critical)))
    return powers


def summary_rows(config: McConfig, summaries: dict[str, McSummary], rate_column: str) -> list[dict]:
    """Flatten summaries to the CSV row schema (one row per variant)."""
    rows = []
    by_label = {v.label: v for v in config.variants}
    for label, summary in summaries.items():
        variant = by_label[label]
        rows.append(
            {
                "variant": variant.form,
                "n": config.n,
                "m": config.bandwidth,
                "stat": variant.kind_label,
                "mean": summary.mean,
                "var": summary.variance,
                "skew": summary.skewness,
                "kurt": summary.kurtosis,
                "q95": summary.q95,
                rate_column: summary.rejection_rate,
            }
        )
    return rows


def power_rows(config: McConfig, powers: dict[str, float]) -> list[dict]:
    """CSV rows for a power study (moment columns left empty)."""
    rows = []
    by_label = {v.label: v for v in config.variants}
    for label, power in powers.items():
        variant = by_label[label]
        rows.append(
            {
                "variant": variant.form,
                "n": config.n,
                "m": config.bandwidth,
                "stat": variant.kind_label,
                "mean": "",
                "var": "",
                "skew": "",
                "kurt": "",
                "q95": "",
                "power": power,
            }
        )
    return rows


def write_summary_csv(rows: list[dict], stream) -> None:
    """Write rows with 6-significant-digit numbers; schema from the first row."""
    if not rows:
        return
    columns = list(rows[0].keys())
    stream.write(",".join(columns) + "\n")
    for row in rows:
        cells = []
        for col in columns:
            value = row[col]
            if isinstance(value, float):
                cells.append(f"{value:.6g}")
            else:
                cells.append(str(value))
        stream.write(",".join(cells) + "\n")


def config_manifest(config: McConfig, command: str) -> dict:
    """JSON-ready run manifest: resolved config, seed, and a content hash."""
    model = config.model
    model_desc = {"name": getattr(model, "name", type(model).__name__)}
    edges = getattr(model, "edges", None)
    if edges is not None:
        model_desc["edges"] = sorted([a + 1, b + 1] for a, b in edges.edges)
        model_desc["r"] = edges.r
    payload = {
        "command": command,
        "process": {
            "a": np.asarray(config.process.a).tolist(),
            "innovation_cov": None
            if config.process.innovation_cov is None
            else np.asarray(config.process.innovation_cov).tolist(),
        },
        "n": config.n,
        "bandwidth": config.bandwidth,
        "model": model_desc,
        "variants": list(config.labels),
        "replications": config.replications,
        "seed": config.seed,
        "burn_in": config.burn_in,
        "alpha_level": config.alpha_level,
    }
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return {
        "config": payload,
        "seed": config.seed,
        "content_hash": hashlib.sha1(canonical.encode()).hexdigest(),
    }
