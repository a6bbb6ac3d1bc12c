"""Monte Carlo ground truth: Poisson base-station fields and simulation-side
estimates of every analytic quantity in the package.

Sampling model
--------------
Interfering BSs form a Poisson field of intensity lambda restricted to the
annulus [r0, R_max]: r0 = 1/sqrt(pi*lambda) is the model's exclusion radius,
and R_max truncates the infinite field so that the expected interference lost
in the tail is at most tail_epsilon * E[I] (choose_rmax).  Counts are
Poisson(lambda*pi*(R_max^2 - r0^2)); radii have density 2r/(R_max^2 - r0^2);
marks are Gamma(m, Omega).

Determinism
-----------
Realizations are generated in fixed chunks of CHUNK; chunk c uses an
independent Philox stream spawned as SeedSequence(seed, spawn_key=(c,)).
The stream therefore depends only on the chunk index, never on the worker
that happens to run it, and per-sample values land at fixed positions in the
output array — identical results for any `workers`.  Scalar reductions go
through math.fsum (exact compensated summation), so merged statistics do not
depend on accumulation order either.

Draw order inside a chunk (relied on by the determinism tests):
interference: counts, radii, marks;
fd estimators: counts, radii, marks, then alpha0;
hd estimator:  counts, radii, marks, then d^2 (power control), then g.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import NetworkConfig, derived_geometry, validate
from .powercontrol import WaterfillSolution, power_policy

CHUNK = 1024


@dataclass(frozen=True)
class MCConfig:
    """Monte Carlo run parameters.

    r_max=None means "choose from tail_epsilon" (see choose_rmax).  The
    default tail budget 1e-4 keeps the truncation bias an order of magnitude
    below typical MC noise; heavy sweeps may loosen it (the cost scales like
    1/tail_epsilon points per realization at eta=4).
    """

    n_samples: int
    seed: int
    r_max: Optional[float] = None
    tail_epsilon: float = 1e-4
    workers: int = 1

    def __post_init__(self):
        if not self.n_samples >= 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.seed < 0 or self.seed >> 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.r_max is not None and not self.r_max > 0:
            raise ValueError(f"r_max must be > 0, got {self.r_max}")
        if not 0.0 < self.tail_epsilon <= 0.01:
            raise ValueError(
                f"tail_epsilon must be in (0, 0.01], got {self.tail_epsilon}")
        if not self.workers >= 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class SampleStats:
    """mean/variance (ddof=1)/std_error = sqrt(variance/n) of one estimate;
    histogram, when present, is (bin_edges, counts) with counts summing to n."""

    mean: float
    variance: float
    std_error: float
    n: int
    histogram: Optional[tuple] = None


def choose_rmax(cfg: NetworkConfig, eps: float) -> float:
    """Truncation radius with expected relative tail loss eps.

    The mean interference from BSs beyond R is
    2*pi*lambda*Omega*P_BS*R^(2-eta)/(eta-2); dividing by the same expression
    at R = r0 (the full mean) leaves (R/r0)^(2-eta), so
    R_max = r0 * eps^(1/(2-eta)).  eps = 1 returns r0 itself.
    """
    validate(cfg)
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    geo = derived_geometry(cfg)
    return geo.r0 * eps ** (1.0 / (2.0 - cfg.eta))


def _resolve_rmax(cfg: NetworkConfig, mc: MCConfig, r_min: float) -> float:
    if mc.r_max is not None:
        if not mc.r_max > r_min:
            raise ValueError(
                f"r_max must exceed the exclusion radius {r_min!r}, "
                f"got {mc.r_max!r}")
        return mc.r_max
    return r_min * mc.tail_epsilon ** (1.0 / (2.0 - cfg.eta))


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk_index,))))


def _field_interference(cfg: NetworkConfig, r0: float, rmax: float,
                        size: int, rng: np.random.Generator) -> np.ndarray:
    """`size` i.i.d. draws of the aggregate interference (W)."""
    nu = cfg.lam * math.pi * (rmax * rmax - r0 * r0)
    counts = rng.poisson(nu, size)
    total = int(counts.sum())
    u = rng.random(total)
    r_sq = r0 * r0 + u * (rmax * rmax - r0 * r0)
    fi = cfg.fading_interferer
    marks = rng.gamma(fi.shape, fi.scale, total)
    if cfg.p_bs == 0.0:
        return np.zeros(size)
    w = cfg.p_bs * marks * r_sq ** (-0.5 * cfg.eta)
    idx = np.repeat(np.arange(size), counts)
    return np.bincount(idx, weights=w, minlength=size)


def sample_interference(cfg: NetworkConfig, mc: MCConfig,
                        rng: np.random.Generator) -> float:
    """One draw of the aggregate interference using the caller's rng."""
    validate(cfg)
    geo = derived_geometry(cfg)
    rmax = _resolve_rmax(cfg, mc, geo.r0)
    return float(_field_interference(cfg, geo.r0, rmax, 1, rng)[0])


def _run_chunks(mc: MCConfig,
                fn: Callable[[int, np.random.Generator], np.ndarray]) -> np.ndarray:
    """Fill a length-n array with fn(chunk_size, chunk_rng) per chunk.

    Chunk slices are disjoint, so threads write without coordination; the
    result is identical for any worker count.
    """
    n = mc.n_samples
    out = np.empty(n)
    spans = [(c, c * CHUNK, min(CHUNK, n - c * CHUNK))
             for c in range((n + CHUNK - 1) // CHUNK)]

    def work(span):
        c, start, size = span
        out[start:start + size] = fn(size, _chunk_rng(mc.seed, c))

    if mc.workers == 1:
        for span in spans:
            work(span)
    else:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            list(pool.map(work, spans))
    return out


def summarize(values: np.ndarray, histogram: bool = False) -> SampleStats:
    n = values.size
    mean = math.fsum(values) / n
    if n > 1:
        var = math.fsum((values - mean) ** 2) / (n - 1)
    else:
        var = 0.0
    hist = None
    if histogram:
        edges = np.histogram_bin_edges(values, bins="fd")
        counts, edges = np.histogram(values, bins=edges)
        hist = (edges, counts)
    return SampleStats(mean=mean, variance=var,
                       std_error=math.sqrt(var / n), n=n, histogram=hist)


def interference_samples(cfg: NetworkConfig, mc: MCConfig,
                         r_min: Optional[float] = None) -> np.ndarray:
    """n_samples i.i.d. aggregate-interference draws (W).

    r_min overrides the exclusion radius (default: the model's r0), mirroring
    the same override on the analytic moment formulas.
    """
    validate(cfg)
    geo = derived_geometry(cfg)
    if r_min is None:
        r_min = geo.r0
    elif not r_min > 0:
        raise ValueError(f"r_min must be > 0, got {r_min}")
    rmax = _resolve_rmax(cfg, mc, r_min)
    return _run_chunks(mc, lambda size, rng:
                       _field_interference(cfg, r_min, rmax, size, rng))


def estimate_interference_moments(cfg: NetworkConfig, mc: MCConfig,
                                  r_min: Optional[float] = None) -> SampleStats:
    """Empirical mean/variance/histogram of the aggregate interference.

    Bins are Freedman-Diaconis on the sample.  Requires n_samples >= 1e4 so
    the histogram and the variance are worth reporting.
    """
    if mc.n_samples < 10_000:
        raise ValueError(
            f"moment estimation needs n_samples >= 10000, got {mc.n_samples}")
    return summarize(interference_samples(cfg, mc, r_min=r_min), histogram=True)


def _signal_gain(cfg: NetworkConfig, rng: np.random.Generator,
                 size: int) -> np.ndarray:
    """Composite signal gain h = alpha0 / (2 sqrt(lambda))^eta."""
    fs = cfg.fading_signal
    alpha0 = rng.gamma(fs.shape, fs.scale, size)
    return alpha0 * (2.0 * math.sqrt(cfg.lam)) ** (-cfg.eta)


def estimate_fd_optimal(cfg: NetworkConfig, mc: MCConfig,
                        sol: WaterfillSolution) -> SampleStats:
    """Simulation-side FD water-filling rate (bit/s).

    Per sample: I from the Poisson field (not the Gamma fit), h from the
    signal fading, gamma = h/(I + N0), rate = B*log2(1 + P(gamma)*gamma)
    with the analytic policy P from `sol`.  Contributions are exactly zero
    below the cutoff 1/a0 because power_policy returns exactly zero there.
    The gap between this estimate and the quadrature capacity measures the
    end-to-end Gamma-approximation error of the analytic pipeline.
    """
    validate(cfg)
    geo = derived_geometry(cfg)
    rmax = _resolve_rmax(cfg, mc, geo.r0)

    def chunk(size, rng):
        i_agg = _field_interference(cfg, geo.r0, rmax, size, rng)
        h = _signal_gain(cfg, rng, size)
        gamma = h / (i_agg + cfg.n0)
        p = power_policy(sol, gamma)
        return cfg.bandwidth * np.log2(1.0 + p * gamma)

    return summarize(_run_chunks(mc, chunk))


def estimate_fd_fixed(cfg: NetworkConfig, mc: MCConfig) -> SampleStats:
    """Simulation-side FD rate at constant transmit power p_bar (bit/s)."""
    if cfg.p_bar == 0.0:
        # every realization rates exactly 0; skip the p_bar > 0 validation
        return SampleStats(mean=0.0, variance=0.0, std_error=0.0, n=mc.n_samples)
    validate(cfg)
    geo = derived_geometry(cfg)
    rmax = _resolve_rmax(cfg, mc, geo.r0)

    def chunk(size, rng):
        i_agg = _field_interference(cfg, geo.r0, rmax, size, rng)
        h = _signal_gain(cfg, rng, size)
        gamma = h / (i_agg + cfg.n0)
        return cfg.bandwidth * np.log2(1.0 + cfg.p_bar * gamma)

    return summarize(_run_chunks(mc, chunk))


def estimate_hd(cfg: NetworkConfig, rho: float, mc: MCConfig) -> SampleStats:
    """Half-duplex benchmark (B/2)*E[log2(1 + rho*g/(I_u + N0))] (bit/s).

    Reconstructed interference model (the source for this benchmark is
    external; documented here and tested for its claimed invariances):
    interfering uplink users form a Poisson field of intensity lambda (one
    active co-channel user per cell) outside r0, truncated at the same
    R_max rule as the BS field; each transmits rho*d^eta where d is its own
    nearest-BS distance (Rayleigh, d^2 ~ Exp(mean 1/(pi*lambda))) — path-loss
    inversion to received level rho; interferer channels are Gamma(m, Omega).
    The served link sees a unit-mean Gamma(m0, 1/m0) gain g, so the received
    signal power is rho*g.  The estimate is insensitive to both lambda and
    rho (tested), which is what makes this reconstruction usable as a
    benchmark.
    """
    validate(cfg)
    if not rho >= 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    geo = derived_geometry(cfg)
    rmax = _resolve_rmax(cfg, mc, geo.r0)
    m0 = cfg.fading_signal.shape
    fi = cfg.fading_interferer

    def chunk(size, rng):
        nu = cfg.lam * math.pi * (rmax * rmax - geo.r0 * geo.r0)
        counts = rng.poisson(nu, size)
        total = int(counts.sum())
        u = rng.random(total)
        r_sq = geo.r0 * geo.r0 + u * (rmax * rmax - geo.r0 * geo.r0)
        marks = rng.gamma(fi.shape, fi.scale, total)
        d_sq = rng.exponential(1.0 / (math.pi * cfg.lam), total)
        w = rho * d_sq ** (0.5 * cfg.eta) * marks * r_sq ** (-0.5 * cfg.eta)
        idx = np.repeat(np.arange(size), counts)
        i_up = np.bincount(idx, weights=w, minlength=size)
        g = rng.gamma(m0, 1.0 / m0, size)
        sinr = rho * g / (i_up + cfg.n0)
        return 0.5 * cfg.bandwidth * np.log2(1.0 + sinr)

    return summarize(_run_chunks(mc, chunk))


def write_histogram_csv(path: str, stats: SampleStats,
                        pdf: Optional[Callable[[float], float]] = None) -> None:
    """Write the histogram as CSV rows bin_left,bin_right,density.

    When `pdf` is given, a fourth column holds it at the bin midpoint —
    the analytic overlay for the empirical-density plot.
    """
    if stats.histogram is None:
        raise ValueError("SampleStats carries no histogram")
    edges, counts = stats.histogram
    widths = np.diff(edges)
    density = counts / (stats.n * widths)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        header = "bin_left,bin_right,density"
        if pdf is not None:
            header += ",model_density"
        fh.write(header + "\n")
        for i in range(len(counts)):
            row = f"{edges[i]:.9e},{edges[i + 1]:.9e},{density[i]:.9e}"
            if pdf is not None:
                mid = 0.5 * (edges[i] + edges[i + 1])
                row += f",{pdf(mid):.9e}"
            fh.write(row + "\n")
