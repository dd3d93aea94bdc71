"""Irreducible root systems in explicit rational Euclidean coordinates.

Families A-G are realized in their standard models (A_n in the sum-zero
hyperplane of R^{n+1}, B/C/D in R^n, G_2 in R^3, F_4 in R^4, E_6/7/8 inside
R^8) so that every coordinate is a half-integer and all geometric predicates
can be evaluated exactly with Fractions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact

DEFAULT_MAX_CLASSICAL_RANK = 12

_CLASSICAL_RANK_MIN = {"A": 1, "B": 2, "C": 3, "D": 4}


class InvalidRootSystemError(ValueError):
    """Raised when (family, rank) is not a valid irreducible type."""


class NotARootError(ValueError):
    """Raised when a vector is not a root of the given system."""


@dataclass(frozen=True)
class Root:
    """A root: ambient coordinates plus its integer expansion in the base."""

    vector: tuple
    base_coefficients: tuple

    def __neg__(self):
        return Root(
            tuple(-c for c in self.vector),
            tuple(-c for c in self.base_coefficients),
        )

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.base_coefficients) and any(
            c > 0 for c in self.base_coefficients
        )


def _half(n: int) -> Fraction:
    return Fraction(n, 2)


def _e(i: int, dim: int) -> tuple:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))


def _simple_root_coords(family: str, rank: int) -> list:
    dim_e8 = 8
    if family == "A":
        d = rank + 1
        return [exact.sub(_e(i, d), _e(i + 1, d)) for i in range(rank)]
    if family == "B":
        d = rank
        out = [exact.sub(_e(i, d), _e(i + 1, d)) for i in range(rank - 1)]
        out.append(_e(rank - 1, d))
        return out
    if family == "C":
        d = rank
        out = [exact.sub(_e(i, d), _e(i + 1, d)) for i in range(rank - 1)]
        out.append(exact.scale(2, _e(rank - 1, d)))
        return out
    if family == "D":
        d = rank
        out = [exact.sub(_e(i, d), _e(i + 1, d)) for i in range(rank - 1)]
        out.append(exact.add(_e(rank - 2, d), _e(rank - 1, d)))
        return out
    if family == "G":
        return [
            exact.vec(1, -1, 0),
            exact.vec(-2, 1, 1),
        ]
    if family == "F":
        return [
            exact.vec(0, 1, -1, 0),
            exact.vec(0, 0, 1, -1),
            exact.vec(0, 0, 0, 1),
            exact.vec(_half(1), -_half(1), -_half(1), -_half(1)),
        ]
    if family == "E":
        e8 = [
            (_half(1), -_half(1), -_half(1), -_half(1),
             -_half(1), -_half(1), -_half(1), _half(1)),
            exact.add(_e(0, dim_e8), _e(1, dim_e8)),
            exact.sub(_e(1, dim_e8), _e(0, dim_e8)),
            exact.sub(_e(2, dim_e8), _e(1, dim_e8)),
            exact.sub(_e(3, dim_e8), _e(2, dim_e8)),
            exact.sub(_e(4, dim_e8), _e(3, dim_e8)),
            exact.sub(_e(5, dim_e8), _e(4, dim_e8)),
            exact.sub(_e(6, dim_e8), _e(5, dim_e8)),
        ]
        return e8[:rank]
    raise InvalidRootSystemError(f"unknown family {family!r}")


def validate_type(family: str, rank: int,
                  max_classical_rank: int = DEFAULT_MAX_CLASSICAL_RANK) -> None:
    if family in _CLASSICAL_RANK_MIN:
        lo = _CLASSICAL_RANK_MIN[family]
        if rank < lo:
            raise InvalidRootSystemError(
                f"{family}_{rank} invalid: family {family} requires rank >= {lo}"
            )
        if rank > max_classical_rank:
            raise InvalidRootSystemError(
                f"{family}_{rank} invalid: classical rank capped at "
                f"{max_classical_rank} (configurable)"
            )
        return
    if family == "E":
        if rank not in (6, 7, 8):
            raise InvalidRootSystemError(
                f"E_{rank} invalid: family E requires rank in {{6, 7, 8}}"
            )
        return
    if family == "F":
        if rank != 4:
            raise InvalidRootSystemError(f"F_{rank} invalid: family F requires rank 4")
        return
    if family == "G":
        if rank != 2:
            raise InvalidRootSystemError(f"G_{rank} invalid: family G requires rank 2")
        return
    raise InvalidRootSystemError(
        f"unknown family {family!r}: expected one of A, B, C, D, E, F, G"
    )


@dataclass(eq=False)
class RootSystem:
    """An irreducible root system; immutable after construction."""

    family: str
    rank: int
    simple_roots: list
    roots: list
    positive_roots: list
    cartan: tuple
    irreducible: bool = True

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def ambient_dim(self) -> int:
        return len(self.simple_roots[0].vector)

    @cached_property
    def _root_index_by_coeffs(self) -> dict:
        return {r.base_coefficients: i for i, r in enumerate(self.roots)}

    @cached_property
    def _root_index_by_vector(self) -> dict:
        return {r.vector: i for i, r in enumerate(self.roots)}

    def root_index(self, root: Root) -> int:
        return self._root_index_by_coeffs[root.base_coefficients]

    @cached_property
    def gram(self) -> tuple:
        """Gram matrix of the simple roots, exact."""
        return tuple(
            tuple(exact.dot(bi.vector, bj.vector) for bj in self.simple_roots)
            for bi in self.simple_roots
        )

    @cached_property
    def gram_inv(self) -> tuple:
        return exact.inverse(self.gram)

    @cached_property
    def dual_basis(self) -> list:
        """Vectors d_i in span(Phi) with <d_i, beta_j> = delta_ij, exact."""
        out = []
        for i in range(self.rank):
            coeffs = tuple(self.gram_inv[i][j] for j in range(self.rank))
            v = tuple(Fraction(0) for _ in range(self.ambient_dim))
            for c, b in zip(coeffs, self.simple_roots):
                v = exact.add(v, exact.scale(c, b.vector))
            out.append(v)
        return out

    # ---- float views used by the numeric modules ----

    @cached_property
    def simple_matrix(self) -> np.ndarray:
        """(rank, ambient_dim) float array of simple-root coordinates."""
        return np.array([[float(c) for c in b.vector] for b in self.simple_roots])

    @cached_property
    def positive_matrix(self) -> np.ndarray:
        return np.array([[float(c) for c in r.vector] for r in self.positive_roots])

    @cached_property
    def span_basis(self) -> np.ndarray:
        """(rank, ambient_dim) orthonormal basis of span(Phi), deterministic
        Gram-Schmidt of the simple roots in base order."""
        basis = []
        for row in self.simple_matrix:
            v = row.copy()
            for u in basis:
                v -= (v @ u) * u
            v /= np.linalg.norm(v)
            basis.append(v)
        return np.array(basis)

    def from_span_coords(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return coords @ self.span_basis

    def to_span_coords(self, H) -> np.ndarray:
        return self.span_basis @ np.asarray(H, dtype=float)

    @cached_property
    def canonical_regular_point(self) -> np.ndarray:
        """Sum of the unit fundamental-coweight directions, scaled to unit norm."""
        u = np.zeros(self.ambient_dim)
        for d in self.dual_basis:
            v = np.array([float(c) for c in d])
            u += v / np.linalg.norm(v)
        return u / np.linalg.norm(u)


def _close_under_reflections(cartan: tuple, rank: int) -> list:
    """All roots as integer base-coefficient tuples, by closing the unit
    vectors under the simple reflections acting in coefficient space."""
    start = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    seen = set(start)
    frontier = list(start)
    while frontier:
        nxt = []
        for c in frontier:
            for j in range(rank):
                # <alpha, beta_j^vee> = sum_i c_i * cartan[i][j]
                pairing = sum(c[i] * cartan[i][j] for i in range(rank))
                image = tuple(
                    c[l] - pairing if l == j else c[l] for l in range(rank)
                )
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return sorted(seen)


def _make_roots(simple_coords: list, coeff_tuples: list) -> list:
    out = []
    for coeffs in coeff_tuples:
        v = tuple(Fraction(0) for _ in range(len(simple_coords[0])))
        for c, b in zip(coeffs, simple_coords):
            if c:
                v = exact.add(v, exact.scale(c, b))
        out.append(Root(v, tuple(coeffs)))
    return out


def build_root_system(family: str, rank: int,
                      max_classical_rank: int = DEFAULT_MAX_CLASSICAL_RANK) -> RootSystem:
    """Construct a validated irreducible root system in standard coordinates."""
    validate_type(family, rank, max_classical_rank)
    simple_coords = _simple_root_coords(family, rank)
    cartan = tuple(
        tuple(
            int(2 * exact.dot(bi, bj) / exact.dot(bj, bj))
            for bj in simple_coords
        )
        for bi in simple_coords
    )
    coeff_tuples = _close_under_reflections(cartan, rank)
    roots = _make_roots(simple_coords, coeff_tuples)
    positive = [r for r in roots if r.is_positive]
    simple = [roots[i] for i in range(len(roots))
              if sum(abs(c) for c in roots[i].base_coefficients) == 1
              and roots[i].is_positive]
    # keep base order, not lexicographic order
    simple = sorted(simple, key=lambda r: r.base_coefficients.index(1))
    return RootSystem(
        family=family,
        rank=rank,
        simple_roots=simple,
        roots=roots,
        positive_roots=positive,
        cartan=cartan,
    )


def cartan_matrix(rs: RootSystem) -> tuple:
    return rs.cartan


def expand_in_base(rs: RootSystem, alpha) -> tuple:
    """Integer base coefficients of a root, given as a Root or a coordinate
    tuple; rejects non-roots."""
    if isinstance(alpha, Root):
        idx = rs._root_index_by_coeffs.get(alpha.base_coefficients)
        if idx is None or rs.roots[idx].vector != alpha.vector:
            raise NotARootError(f"{alpha} is not a root of {rs.label}")
        return alpha.base_coefficients
    v = tuple(exact.frac(c) for c in alpha)
    idx = rs._root_index_by_vector.get(v)
    if idx is None:
        raise NotARootError(f"{v} is not a root of {rs.label}")
    return rs.roots[idx].base_coefficients


@dataclass(eq=False)
class ProductRootSystem:
    """Finite product of irreducible systems, embedded in the direct sum with
    zero padding. Shares the RootSystem field surface so the subroot and
    chamber machinery can treat it uniformly."""

    factors: list
    family: str = field(init=False)
    rank: int = field(init=False)
    simple_roots: list = field(init=False)
    roots: list = field(init=False)
    positive_roots: list = field(init=False)
    cartan: tuple = field(init=False)
    irreducible: bool = field(init=False, default=False)

    def __post_init__(self):
        if not self.factors:
            raise InvalidRootSystemError("product requires a non-empty factor list")
        self.family = "x".join(f.label for f in self.factors)
        self.rank = sum(f.rank for f in self.factors)
        dims = [f.ambient_dim for f in self.factors]
        total_dim = sum(dims)
        offsets = [sum(dims[:i]) for i in range(len(dims))]
        rank_offsets = [sum(f.rank for f in self.factors[:i])
                        for i in range(len(self.factors))]

        def embed(root: Root, fi: int) -> Root:
            pre = offsets[fi]
            post = total_dim - pre - dims[fi]
            vec = (tuple(Fraction(0) for _ in range(pre)) + root.vector
                   + tuple(Fraction(0) for _ in range(post)))
            cpre = rank_offsets[fi]
            cpost = self.rank - cpre - self.factors[fi].rank
            coeffs = (0,) * cpre + root.base_coefficients + (0,) * cpost
            return Root(vec, coeffs)

        self.simple_roots = [embed(b, fi)
                             for fi, f in enumerate(self.factors)
                             for b in f.simple_roots]
        self.roots = sorted(
            (embed(r, fi) for fi, f in enumerate(self.factors) for r in f.roots),
            key=lambda r: r.base_coefficients,
        )
        self.positive_roots = [r for r in self.roots if r.is_positive]
        self.cartan = tuple(
            tuple(
                int(2 * exact.dot(bi.vector, bj.vector)
                    / exact.dot(bj.vector, bj.vector))
                for bj in self.simple_roots
            )
            for bi in self.simple_roots
        )

    @property
    def label(self) -> str:
        return self.family

    @property
    def ambient_dim(self) -> int:
        return len(self.simple_roots[0].vector)

    # reuse the RootSystem float/exact helpers
    gram = RootSystem.gram
    gram_inv = RootSystem.gram_inv
    dual_basis = RootSystem.dual_basis
    simple_matrix = RootSystem.simple_matrix
    positive_matrix = RootSystem.positive_matrix
    span_basis = RootSystem.span_basis
    from_span_coords = RootSystem.from_span_coords
    to_span_coords = RootSystem.to_span_coords
    canonical_regular_point = RootSystem.canonical_regular_point
    _root_index_by_coeffs = RootSystem._root_index_by_coeffs
    _root_index_by_vector = RootSystem._root_index_by_vector
    root_index = RootSystem.root_index


def product(factors: list) -> ProductRootSystem:
    return ProductRootSystem(list(factors))


def parse_system_label(label: str,
                       max_classical_rank: int = DEFAULT_MAX_CLASSICAL_RANK):
    """Parse "B3" or "B3xA1xA1" into a RootSystem / ProductRootSystem."""
    parts = label.replace(" ", "").split("x")
    systems = []
    for p in parts:
        if len(p) < 2 or not p[0].isalpha() or not p[1:].isdigit():
            raise InvalidRootSystemError(f"cannot parse system label {p!r}")
        systems.append(build_root_system(p[0].upper(), int(p[1:]), max_classical_rank))
    if len(systems) == 1:
        return systems[0]
    return product(systems)


def to_json_dict(rs) -> dict:
    """Canonical JSON document; rationals as "p/q" strings."""

    def fmt_vec(v):
        return [exact.format_fraction(c) for c in v]

    return {
        "family": rs.family,
        "rank": rs.rank,
        "ambient_dim": rs.ambient_dim,
        "simple_roots": [fmt_vec(b.vector) for b in rs.simple_roots],
        "positive_roots": [fmt_vec(r.vector) for r in rs.positive_roots],
        "cartan": [list(row) for row in rs.cartan],
    }


def ball_volume(n: int, r: float) -> float:
    """Euclidean volume of the n-ball of radius r."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * r**n


def sphere_surface(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)
