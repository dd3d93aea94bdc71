"""The alternating Weyl-sum numerator, the orbital Fourier quotient, and the
square-integrability integrand.

The numerator is A(H) = sum over the Weyl group of sgn(w) e^{i <w(H), H0>}.
Scalar evaluations use exact-compensated summation (math.fsum); the batch
path used by the Monte Carlo shells relies on numpy pairwise summation, which
at the group orders used here (<= 1152 terms) stays far below 1e-10 relative
error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .roots import RootSystem
from .weyl import WeylGroup


class NotRegularError(ValueError):
    pass


@dataclass
class RegularPoint:
    """A point strictly inside the fundamental chamber."""

    rs: RootSystem
    h0: np.ndarray

    def __post_init__(self):
        self.h0 = np.asarray(self.h0, dtype=float)
        if self.h0.shape != (self.rs.ambient_dim,):
            raise NotRegularError(
                f"H0 has dimension {self.h0.shape}, ambient is {self.rs.ambient_dim}"
            )
        dots = self.rs.positive_matrix @ self.h0
        if not np.all(dots > 0):
            bad = self.rs.positive_roots[int(np.argmin(dots))]
            raise NotRegularError(
                f"H0 is not regular: <alpha, H0> = {dots.min():.3g} <= 0 "
                f"for alpha with base coefficients {bad.base_coefficients}"
            )


def canonical_regular_point(rs: RootSystem) -> RegularPoint:
    return RegularPoint(rs, rs.canonical_regular_point)


@dataclass
class IntegrandSpec:
    """Everything needed to evaluate |A|^{2k} / |prod <alpha,H>|^{2k-2}."""

    rs: RootSystem
    W: WeylGroup
    h0: RegularPoint
    k: Fraction
    wall_guard: float = 1e-9  # relative to |H|

    def __post_init__(self):
        self.k = Fraction(self.k)
        if self.k < 1:
            raise ValueError(f"k = {self.k} < 1")
        if self.wall_guard <= 0:
            raise ValueError("wall guard must be positive")

    @property
    def k_float(self) -> float:
        return float(self.k)

    @cached_property
    def sigma_t_h0(self) -> np.ndarray:
        """(|W|, d) rows sigma^T H0 = sigma^{-1}(H0), so that
        <sigma(H), H0> = H . row_sigma. Fixed enumeration order."""
        mats = self.W.action_matrices
        return np.einsum("wij,i->wj", mats, self.h0.h0)

    @cached_property
    def signs(self) -> np.ndarray:
        return self.W.signs().astype(float)


def numerator_A(W: WeylGroup, h0: RegularPoint, H) -> complex:
    """Scalar A(H) with compensated summation in enumeration order."""
    H = np.asarray(H, dtype=float)
    phases = np.einsum("wij,i->wj", W.action_matrices, h0.h0) @ H
    signs = W.signs()
    re = math.fsum(s * math.cos(p) for s, p in zip(signs, phases))
    im = math.fsum(s * math.sin(p) for s, p in zip(signs, phases))
    return complex(re, im)


def numerator_A_batch(spec: IntegrandSpec, H: np.ndarray) -> np.ndarray:
    """A(H) for an (N, d) batch; complex (N,)."""
    phases = H @ spec.sigma_t_h0.T  # (N, |W|)
    return (spec.signs * np.exp(1j * phases)).sum(axis=1)


def _denominator_batch(spec: IntegrandSpec, H: np.ndarray) -> np.ndarray:
    dots = H @ spec.rs.positive_matrix.T  # (N, |Phi+|)
    return dots.prod(axis=1), np.abs(dots).min(axis=1)


def mu_hat(spec: IntegrandSpec, H) -> complex:
    """A(H) / prod <alpha, H>, guarded to 0 within the wall guard."""
    H = np.asarray(H, dtype=float)
    dots = spec.rs.positive_matrix @ H
    norm = np.linalg.norm(H)
    if np.abs(dots).min() <= spec.wall_guard * max(norm, 1e-300):
        return complex(0.0)
    A = numerator_A(spec.W, spec.h0, H)
    return A / float(dots.prod())


def integrand(spec: IntegrandSpec, H) -> float:
    """|A|^{2k} / |prod|^{2k-2}, continuous (0 at walls for k > 1)."""
    return float(integrand_batch(spec, np.asarray(H, dtype=float)[None, :])[0])


def integrand_batch(spec: IntegrandSpec, H: np.ndarray) -> np.ndarray:
    """Vectorized integrand over an (N, d) batch of chamber points."""
    absA = np.abs(numerator_A_batch(spec, H))
    k = spec.k_float
    if spec.k == 1:
        # exponent 2k-2 = 0: skip the product entirely
        return absA**2
    prod, min_dot = _denominator_batch(spec, H)
    norms = np.linalg.norm(H, axis=1)
    guarded = min_dot <= spec.wall_guard * np.maximum(norms, 1e-300)
    out = np.zeros(H.shape[0])
    ok = ~guarded
    out[ok] = absA[ok] ** (2 * k) / np.abs(prod[ok]) ** (2 * k - 2)
    return out
