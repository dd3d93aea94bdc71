"""Convergence analysis of the square-integrability criterion.

The exact threshold is k* = 1 + n/|Phi| (total root count). Convergence or
divergence at a given k is decided empirically from dyadic-shell Monte Carlo
masses: shell mass scales like r^{n - |Phi|(k-1)}, so a fitted log2 slope
well below zero certifies a convergent dyadic sum, while a flat or growing
slope together with the exact comparison k <= k* certifies divergence in the
sense of the almost-periodic lower-bound argument.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from . import exact
from .fourier import IntegrandSpec, integrand_batch
from .roots import ProductRootSystem, RootSystem, ball_volume, sphere_surface

WORKERS_ENV = "WEYLSCAN_WORKERS"
BLOCK_SIZE = 4096
MIN_ACCEPTANCE = 1e-4

CONVERGE_SLOPE = -0.3
DIVERGE_SLOPE = -0.1


class SamplingError(RuntimeError):
    pass


def k_star(rs: RootSystem) -> Fraction:
    """1 + n/|Phi|, which equals dim/(dim - rank) with dim = n + |Phi|."""
    if not rs.irreducible:
        raise ValueError("k_star requires an irreducible system; see reducible_k_star")
    n, nroots = rs.rank, len(rs.roots)
    value = 1 + Fraction(n, nroots)
    dim = n + nroots
    assert value == Fraction(dim, dim - n)
    return value


def reducible_k_star(prs: ProductRootSystem) -> Fraction:
    factors = getattr(prs, "factors", None)
    if factors is None:
        return k_star(prs)
    if not factors:
        raise ValueError("empty product")
    return max(k_star(f) for f in factors)


@dataclass(frozen=True)
class ShellEstimate:
    r_lo: float
    r_hi: float
    mass: float
    std_error: float
    samples: int

    def to_dict(self) -> dict:
        return {
            "r_lo": self.r_lo, "r_hi": self.r_hi, "mass": self.mass,
            "std_error": self.std_error, "samples": self.samples,
        }


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _sample_chamber_directions(rs: RootSystem, count: int, rng) -> np.ndarray:
    """Uniform directions on the unit sphere of span(Phi) restricted to the
    open chamber; rejection with the chamber acceptance rate 1/|W|."""
    basis = rs.span_basis
    simple = rs.simple_matrix
    out = []
    have = 0
    drawn = 0
    while have < count:
        batch = max(8192, 4 * (count - have))
        Z = rng.standard_normal((batch, rs.rank))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        H = Z @ basis
        ok = np.all(H @ simple.T > 0, axis=1)
        drawn += batch
        acc = H[ok]
        out.append(acc)
        have += acc.shape[0]
        if drawn >= 10_000 and have / drawn < MIN_ACCEPTANCE:
            raise SamplingError(
                f"chamber rejection acceptance rate {have / drawn:.2e} below "
                f"{MIN_ACCEPTANCE}; use an analytic sector bound instead"
            )
    return np.concatenate(out)[:count]


def _shell_block(spec: IntegrandSpec, r: float, n_samples: int, seed_seq,
                 integrand_fn) -> tuple:
    """One deterministic sample block; returns (sum f, sum f^2)."""
    rng = np.random.default_rng(seed_seq)
    rs = spec.rs
    n = rs.rank
    U = _sample_chamber_directions(rs, n_samples, rng)
    u01 = rng.uniform(size=n_samples)
    radii = r * (1.0 + u01 * (2.0**n - 1.0)) ** (1.0 / n)  # density ~ t^{n-1}
    H = U * radii[:, None]
    f = integrand_fn(H)
    return float(np.sum(f)), float(np.sum(f * f))


def shell_mass(spec: IntegrandSpec, r: float, samples: int, seed: int,
               stream: int = 0, integrand_fn=None) -> ShellEstimate:
    """Unbiased Monte Carlo estimate of the integral over
    chamber cap {r <= |H| <= 2r}.

    Work is split into fixed-size blocks with per-block derived seeds and a
    fixed-order compensated reduction, so results are bit-identical for any
    worker count.
    """
    if r < 1:
        raise ValueError("shell radius must be >= 1")
    if samples < 1000:
        raise ValueError("at least 1000 samples per shell required")
    if integrand_fn is None:
        integrand_fn = lambda H: integrand_batch(spec, H)
    rs = spec.rs
    n = rs.rank
    nblocks = (samples + BLOCK_SIZE - 1) // BLOCK_SIZE
    sizes = [min(BLOCK_SIZE, samples - i * BLOCK_SIZE) for i in range(nblocks)]
    seqs = [np.random.SeedSequence([seed, stream, b]) for b in range(nblocks)]

    workers = _workers()
    if workers == 1:
        partials = [_shell_block(spec, r, sz, sq, integrand_fn)
                    for sz, sq in zip(sizes, seqs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(
                lambda args: _shell_block(spec, r, args[0], args[1], integrand_fn),
                zip(sizes, seqs),
            ))
    s1 = math.fsum(p[0] for p in partials)
    s2 = math.fsum(p[1] for p in partials)
    mean = s1 / samples
    var = max(0.0, (s2 - s1 * s1 / samples) / max(1, samples - 1))

    sector = sphere_surface(n) / spec.W.order
    radial = ((2.0 * r) ** n - r**n) / n
    weight = sector * radial
    return ShellEstimate(
        r_lo=r, r_hi=2.0 * r,
        mass=weight * mean,
        std_error=weight * math.sqrt(var / samples),
        samples=samples,
    )


@dataclass
class ConvergenceReport:
    k: Fraction
    k_star: Fraction
    shells: list
    fitted_slope: float
    theory_slope: float
    verdict: str
    epsilon0: Fraction
    seed: int
    samples_per_shell: int
    h0: list
    guidance: str | None = None

    def to_dict(self) -> dict:
        return {
            "k": float(self.k),
            "k_exact": exact.format_fraction(self.k),
            "k_star": exact.format_fraction(self.k_star),
            "shells": [s.to_dict() for s in self.shells],
            "fitted_slope": self.fitted_slope,
            "theory_slope": self.theory_slope,
            "verdict": self.verdict,
            "epsilon0": exact.format_fraction(self.epsilon0),
            "seed": self.seed,
            "samples_per_shell": self.samples_per_shell,
            "h0": list(self.h0),
            "guidance": self.guidance,
        }


def convergence_scan(spec: IntegrandSpec, shells: int, r0: float,
                     samples: int, seed: int) -> ConvergenceReport:
    """Dyadic shells at r0 * 2^j; slope fit over the last shells//2 shells."""
    from .subroots import epsilon0 as eps0_fn
    if shells < 6:
        raise ValueError("at least 6 shells required")
    rs = spec.rs
    estimates = [
        shell_mass(spec, r0 * 2.0**j, samples, seed, stream=j)
        for j in range(shells)
    ]
    tail = shells // 2
    xs = np.arange(shells - tail, shells, dtype=float)
    ys = np.array([math.log2(max(e.mass, 1e-300)) for e in estimates[-tail:]])
    fitted = float(np.polyfit(xs, ys, 1)[0])

    ks = k_star(rs)
    k = spec.k
    theory = rs.rank - len(rs.roots) * (float(k) - 1.0)
    guidance = None
    if fitted <= CONVERGE_SLOPE:
        verdict = "converges"
    elif fitted >= DIVERGE_SLOPE and k <= ks:
        verdict = "diverges"
    else:
        verdict = "inconclusive"
        guidance = (
            f"fitted slope {fitted:.3f} sits between the divergence margin "
            f"{DIVERGE_SLOPE} and convergence margin {CONVERGE_SLOPE} (or k > k* "
            "while the slope is flat); increase shells/samples or move k away "
            "from the threshold"
        )
    return ConvergenceReport(
        k=k, k_star=ks, shells=estimates, fitted_slope=fitted,
        theory_slope=theory, verdict=verdict, epsilon0=eps0_fn(rs),
        seed=seed, samples_per_shell=samples,
        h0=[float(x) for x in spec.h0.h0], guidance=guidance,
    )


def base_case_integral(h0: float, k: float, a: float, b: float) -> float:
    """Adaptive quadrature of |2 sin(t h0)|^{2k} t^{2-2k} on [a, b], split per
    half-period so each piece is smooth; relative error well below 1e-6."""
    if b <= a:
        return 0.0
    period = math.pi / h0

    def f(t):
        return abs(2.0 * math.sin(t * h0)) ** (2 * k) * t ** (2.0 - 2 * k)

    pieces = []
    lo = a
    # align segment breaks with the zeros of sin(t h0)
    nxt = math.ceil(a / period) * period
    while lo < b:
        hi = min(b, nxt if nxt > lo else nxt + period)
        val, _ = quad(f, lo, hi, epsabs=0.0, epsrel=1e-10, limit=200)
        pieces.append(val)
        lo = hi
        nxt = hi + period
    return math.fsum(pieces)


def base_case_quadrature(h0: float, k: float, r_max: float) -> float:
    """The rank-one model integral from 1 to r_max."""
    if r_max < 2:
        raise ValueError("r_max must be >= 2")
    return base_case_integral(h0, k, 1.0, r_max)


@dataclass
class AlmostPeriodProbe:
    direction: list  # unit vector, ambient coordinates
    r0: float
    delta: float
    epsilon: float
    window_length: float
    windows: int
    recurrences: list = field(default_factory=list)
    missed_windows: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction, "r0": self.r0, "delta": self.delta,
            "epsilon": self.epsilon, "window_length": self.window_length,
            "windows": self.windows, "recurrences": self.recurrences,
            "missed_windows": self.missed_windows,
        }


def _radial_factor(spec: IntegrandSpec, u: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """f(r, u): integrand with the radial power r^{-|Phi|(k-1)} removed, i.e.
    |A(r u)|^{2k} / |prod <alpha, u>|^{2k-2} for unit u."""
    from .fourier import numerator_A_batch
    H = radii[:, None] * u[None, :]
    absA = np.abs(numerator_A_batch(spec, H))
    k = spec.k_float
    if spec.k == 1:
        return absA**2
    denom = np.abs(spec.rs.positive_matrix @ u).prod()
    return absA ** (2 * k) / denom ** (2 * k - 2)


def almost_period_probe(spec: IntegrandSpec, windows: int = 20,
                        delta: float = 0.05, window_length: float | None = None,
                        seed: int = 0, search_budget: int = 64) -> AlmostPeriodProbe:
    """Locate, per consecutive radial window, a radius where the polar factor
    exceeds the level epsilon established on an initial box.

    A window with no recurrence is recorded, not raised; failure to find the
    initial box at all is an error suggesting a larger budget.
    """
    rs = spec.rs
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2718]))
    fmax = float(np.abs(spec.sigma_t_h0).sum(axis=1).max())
    if window_length is None:
        window_length = 40.0 * math.pi / fmax
    step = (math.pi / fmax) / 20.0

    # coarse search for the initial box U
    best = (0.0, None, None)
    for _ in range(search_budget):
        u = _sample_chamber_directions(rs, 1, rng)[0]
        radii = np.arange(1.0 + delta, 1.0 + window_length, step)
        vals = _radial_factor(spec, u, radii)
        j = int(np.argmax(vals))
        if vals[j] > best[0]:
            best = (float(vals[j]), u, float(radii[j]))
    f_peak, u, r0 = best
    if u is None or f_peak <= 0:
        raise SamplingError(
            "no initial box with positive polar factor found; "
            "increase the search budget"
        )
    epsilon = f_peak / 4.0  # box level: f > 2*epsilon at the peak

    probe = AlmostPeriodProbe(
        direction=[float(x) for x in u], r0=r0, delta=delta, epsilon=epsilon,
        window_length=window_length, windows=windows,
    )
    for w in range(1, windows + 1):
        lo = r0 + w * window_length
        radii = np.arange(lo, lo + window_length, step)
        vals = _radial_factor(spec, u, radii)
        hits = np.nonzero(vals > epsilon)[0]
        if hits.size:
            probe.recurrences.append(float(radii[hits[0]] - r0))
        else:
            probe.missed_windows.append(w)
    return probe


def corollary_report(rs: RootSystem) -> dict:
    """Exact arithmetic consequences: the 3/2 power and the L^p exponent."""
    ks = k_star(rs)
    n, nroots = rs.rank, len(rs.roots)
    dim = n + nroots
    three_halves = Fraction(3, 2)
    return {
        "system": rs.label,
        "k_star": exact.format_fraction(ks),
        "corollary1_holds": three_halves > ks,
        "boundary_equality": three_halves == ks,
        "dim": dim,
        "rank": n,
        "corollary2_exponent": exact.format_fraction(Fraction(dim, n)),
        "lp_range": f"p < {exact.format_fraction(Fraction(dim, n))}",
    }
