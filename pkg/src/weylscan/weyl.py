"""Weyl groups as explicit orthogonal transformations with signs.

Elements are stored as permutations of the parent system's root list (a
reflection group element is determined by where it sends the simple roots,
being the identity on the orthogonal complement of span Phi). Composition is
permutation composition, deduplication is exact, and ambient matrices are
recovered on demand, rationally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

import numpy as np

from . import exact
from .roots import Root, RootSystem

DEFAULT_CAP = 10**7


class GroupTooLargeError(RuntimeError):
    """Raised when the requested Weyl group exceeds the generation cap."""


class NotASubgroupError(ValueError):
    pass


def known_weyl_order(family: str, rank: int) -> int:
    if family == "A":
        return factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * factorial(rank)
    if family == "G":
        return 12
    if family == "F":
        return 1152
    if family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[rank]
    raise ValueError(f"unknown family {family!r}")


@dataclass(eq=False)
class WeylElement:
    """One group element: a permutation of the parent root list, its sign,
    and a word in the generating simple reflections (1-based indices)."""

    group: "WeylGroup"
    perm: np.ndarray
    sign: int
    word: tuple

    @property
    def key(self) -> bytes:
        return self.perm[self.group.rs_simple_indices].tobytes()

    def apply_to_root_index(self, i: int) -> int:
        return int(self.perm[i])

    @cached_property
    def matrix(self) -> tuple:
        """Exact ambient matrix (identity on the orthocomplement of span Phi)."""
        return self.group._element_matrix(self)

    def act(self, H):
        """Apply to a vector. Fraction tuples stay exact; floats use the
        cached numeric matrix."""
        if isinstance(H, (tuple, list)) and H and isinstance(H[0], Fraction):
            return exact.mat_vec(self.matrix, tuple(exact.frac(c) for c in H))
        M = self.group.action_matrices[self.index]
        H = np.asarray(H, dtype=float)
        if H.shape[-1] != M.shape[0]:
            raise ValueError(
                f"dimension mismatch: vector has {H.shape[-1]}, ambient is {M.shape[0]}"
            )
        return H @ M.T

    @property
    def index(self) -> int:
        return self.group._index_of_key[self.key]

    def inverse(self) -> "WeylElement":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return WeylElement(self.group, inv, self.sign, tuple(reversed(self.word)))


@dataclass(eq=False)
class WeylGroup:
    """A reflection group generated by simple reflections of a root system."""

    rs: RootSystem
    elements: list
    generator_indices: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _index_of_key(self) -> dict:
        return {w.key: i for i, w in enumerate(self.elements)}

    @cached_property
    def rs_simple_indices(self) -> np.ndarray:
        return np.array([self.rs.root_index(b) for b in self.rs.simple_roots])

    def contains_key(self, key: bytes) -> bool:
        return key in self._index_of_key

    def element_by_key(self, key: bytes) -> WeylElement:
        return self.elements[self._index_of_key[key]]

    def compose(self, w1: WeylElement, w2: WeylElement) -> WeylElement:
        """w1 after w2."""
        return WeylElement(self, w1.perm[w2.perm], w1.sign * w2.sign,
                           w1.word + w2.word)

    def _element_matrix(self, w: WeylElement) -> tuple:
        rs = self.rs
        d = rs.ambient_dim
        n = rs.rank
        # columns: images of the simple roots, then a fixed complement basis
        basis_cols = [b.vector for b in rs.simple_roots]
        image_cols = [rs.roots[int(w.perm[i])].vector
                      for i in self.rs_simple_indices]
        comp = _orthocomplement_basis(basis_cols, d)
        B = exact.transpose(tuple(basis_cols) + tuple(comp))
        BI = exact.transpose(tuple(image_cols) + tuple(comp))
        # M B = BI  =>  M = BI B^{-1}
        return exact.mat_mul(BI, exact.inverse(B)) if n < d else \
            exact.mat_mul(exact.transpose(tuple(image_cols)),
                          exact.inverse(exact.transpose(tuple(basis_cols))))

    @cached_property
    def action_matrices(self) -> np.ndarray:
        """(order, d, d) float matrices, in element enumeration order."""
        rs = self.rs
        d = rs.ambient_dim
        B = rs.simple_matrix.T  # (d, n)
        A = np.linalg.solve(B.T @ B, B.T)  # (n, d), coords in simple basis
        Pperp = np.eye(d) - B @ A
        all_coords = np.array([[float(c) for c in r.vector] for r in rs.roots])
        out = np.empty((self.order, d, d))
        for i, w in enumerate(self.elements):
            Bimg = all_coords[w.perm[self.rs_simple_indices]].T  # (d, n)
            out[i] = Bimg @ A + Pperp
        return out

    def signs(self) -> np.ndarray:
        return np.array([w.sign for w in self.elements])


def _orthocomplement_basis(vectors: list, dim: int) -> list:
    """Exact basis of the orthocomplement of span(vectors) in R^dim, by
    Gaussian elimination on the constraint matrix."""
    rows = [list(v) for v in vectors]
    n = len(rows)
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(dim):
        pr = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * dim
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def simple_reflection(rs: RootSystem, i: int, group: WeylGroup | None = None) -> WeylElement:
    """Reflection through the hyperplane orthogonal to the i-th simple root
    (1-based). Standalone elements get a throwaway singleton group wrapper."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"simple reflection index {i} out of range 1..{rs.rank}")
    perm = _reflection_perm(rs, i - 1)
    if group is None:
        group = WeylGroup(rs=rs, elements=[], generator_indices=(i,))
        w = WeylElement(group, perm, -1, (i,))
        ident = WeylElement(group, np.arange(len(rs.roots), dtype=np.int32), 1, ())
        group.elements = [ident, w]
        return w
    return WeylElement(group, perm, -1, (i,))


def _reflection_perm(rs: RootSystem, j: int) -> np.ndarray:
    """Permutation of rs.roots induced by the reflection in simple root j
    (0-based), computed exactly in base-coefficient space."""
    rank = rs.rank
    cartan = rs.cartan
    index = rs._root_index_by_coeffs
    perm = np.empty(len(rs.roots), dtype=np.int32)
    for a, root in enumerate(rs.roots):
        c = root.base_coefficients
        pairing = sum(c[i] * cartan[i][j] for i in range(rank))
        image = tuple(x - pairing if l == j else x for l, x in enumerate(c))
        perm[a] = index[image]
    return perm


def generate(rs: RootSystem, cap: int = DEFAULT_CAP,
             base_indices: tuple | None = None) -> WeylGroup:
    """Breadth-first closure of the chosen simple reflections.

    base_indices: 1-based indices into the simple roots; defaults to all of
    them (the full Weyl group). Raises GroupTooLargeError if the (known or
    discovered) order exceeds cap.
    """
    if base_indices is None:
        base_indices = tuple(range(1, rs.rank + 1))
    if not base_indices:
        # trivial group
        group = WeylGroup(rs=rs, elements=[], generator_indices=())
        group.elements = [WeylElement(group, np.arange(len(rs.roots), dtype=np.int32), 1, ())]
        return group
    if rs.irreducible and len(base_indices) == rs.rank:
        expected = known_weyl_order(rs.family, rs.rank)
        if expected > cap:
            raise GroupTooLargeError(
                f"Weyl group of {rs.label} has order {expected}, "
                f"exceeding the cap {cap}"
            )
    group = WeylGroup(rs=rs, elements=[], generator_indices=tuple(base_indices))
    nroots = len(rs.roots)
    gen_perms = [_reflection_perm(rs, i - 1) for i in base_indices]
    simple_sel = np.array([rs.root_index(b) for b in rs.simple_roots])

    ident = np.arange(nroots, dtype=np.int32)
    seen = {ident[simple_sel].tobytes(): 0}
    elements = [WeylElement(group, ident, 1, ())]
    frontier = [elements[0]]
    while frontier:
        nxt = []
        for w in frontier:
            for gi, gperm in zip(base_indices, gen_perms):
                perm = w.perm[gperm]
                key = perm[simple_sel].tobytes()
                if key not in seen:
                    if len(elements) >= cap:
                        raise GroupTooLargeError(
                            f"group generation for {rs.label} exceeded the cap {cap}"
                        )
                    seen[key] = len(elements)
                    el = WeylElement(group, perm, w.sign * -1, w.word + (gi,))
                    elements.append(el)
                    nxt.append(el)
        frontier = nxt
    group.elements = elements
    return group


def act(w: WeylElement, H):
    return w.act(H)


def coset_representatives(V: WeylGroup, V1: WeylGroup) -> list:
    """One representative per left coset sigma * V1, in V enumeration order."""
    v_keys = {w.key for w in V.elements}
    for t in V1.elements:
        if t.key not in v_keys:
            raise NotASubgroupError(
                "V1 is not a subgroup of V: element "
                f"with word {t.word} not found in V"
            )
    if V.order % V1.order != 0:
        raise NotASubgroupError("V1 order does not divide V order")
    simple_sel = V.rs_simple_indices
    seen_cosets = set()
    reps = []
    for w in V.elements:
        canon = min(w.perm[t.perm][simple_sel].tobytes() for t in V1.elements)
        if canon not in seen_cosets:
            seen_cosets.add(canon)
            reps.append(w)
    assert len(reps) == V.order // V1.order
    return reps
