"""Simple subroot systems, exact ratio inequalities, and the rank/root-count
ratio table for every irreducible family.

A "simple" subroot system is the intersection of Phi with the integer span of
a subset of the base. The key exact fact verified here: for irreducible Phi
and every proper simple subsystem, n/|Phi| < m/|Psi| strictly, which fails in
the reducible case (B3 x A1 x A1 x A1 against its B3 subsystem).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact
from .roots import Root, RootSystem, build_root_system


@dataclass(eq=False)
class SimpleSubrootSystem:
    """Subsystem generated by a subset of the parent base (1-based indices)."""

    parent: RootSystem
    base_indices: tuple  # sorted, 1-based into parent.simple_roots
    roots: list = field(init=False)
    positive_roots: list = field(init=False)
    simple_roots: list = field(init=False)

    def __post_init__(self):
        self.base_indices = tuple(sorted(self.base_indices))
        if not self.base_indices:
            raise ValueError("empty base subset rejected")
        if any(not 1 <= i <= self.parent.rank for i in self.base_indices):
            raise ValueError(
                f"base indices {self.base_indices} out of range 1..{self.parent.rank}"
            )
        support = set(i - 1 for i in self.base_indices)
        self.roots = [
            r for r in self.parent.roots
            if all(c == 0 for j, c in enumerate(r.base_coefficients)
                   if j not in support)
        ]
        self.positive_roots = [r for r in self.roots if r.is_positive]
        self.simple_roots = [self.parent.simple_roots[i - 1] for i in self.base_indices]

    @property
    def m(self) -> int:
        return len(self.base_indices)

    @property
    def is_empty(self) -> bool:
        return False

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m, len(self.roots))

    @cached_property
    def type_label(self) -> str:
        return classify_simple_roots(self.parent, self.base_indices)

    @property
    def label(self) -> str:
        return self.type_label

    @cached_property
    def span_basis(self) -> np.ndarray:
        """Orthonormal basis of span(Psi), Gram-Schmidt in base order."""
        basis = []
        for g in self.simple_roots:
            v = np.array([float(c) for c in g.vector])
            for u in basis:
                v -= (v @ u) * u
            v /= np.linalg.norm(v)
            basis.append(v)
        return np.array(basis)

    @cached_property
    def gamma_matrix(self) -> np.ndarray:
        return np.array([[float(c) for c in g.vector] for g in self.simple_roots])

    @cached_property
    def dual_basis_exact(self) -> list:
        """omega_i in span(Psi) with <omega_i, gamma_j> = delta_ij."""
        gram = tuple(
            tuple(exact.dot(a.vector, b.vector) for b in self.simple_roots)
            for a in self.simple_roots
        )
        ginv = exact.inverse(gram)
        out = []
        for i in range(self.m):
            v = tuple(Fraction(0) for _ in range(self.parent.ambient_dim))
            for j, g in enumerate(self.simple_roots):
                v = exact.add(v, exact.scale(ginv[i][j], g.vector))
            out.append(v)
        return out


@dataclass(frozen=True)
class EmptySubrootSystem:
    """Psi_1 when Psi has a single simple root."""

    parent: RootSystem

    roots: tuple = ()
    positive_roots: tuple = ()
    simple_roots: tuple = ()
    base_indices: tuple = ()

    @property
    def m(self) -> int:
        return 0

    @property
    def is_empty(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return "0"


@dataclass(frozen=True)
class RatioRecord:
    system: str
    rank: int
    root_count: int
    ratio: Fraction
    subsystem: str = ""
    m: int = 0
    psi_size: int = 0
    sub_ratio: Fraction | None = None
    maximal: bool = True


def simple_subsystem(rs: RootSystem, S) -> SimpleSubrootSystem:
    """Psi = (Z-span of {beta_i : i in S}) cap Phi, S given 1-based."""
    return SimpleSubrootSystem(rs, tuple(S))


def psi_one(psi: SimpleSubrootSystem, drop_position: int = 1):
    """The subsystem of Psi on the base with the designated simple root
    removed (drop_position is 1-based within Psi's base order)."""
    if not 1 <= drop_position <= psi.m:
        raise IndexError(f"drop position {drop_position} out of range 1..{psi.m}")
    remaining = tuple(i for pos, i in enumerate(psi.base_indices, start=1)
                      if pos != drop_position)
    if not remaining:
        return EmptySubrootSystem(psi.parent)
    return SimpleSubrootSystem(psi.parent, remaining)


def _component_partition(rs: RootSystem, base_indices: tuple) -> list:
    """Connected components of the Dynkin graph on the chosen base subset."""
    idx = list(base_indices)
    adj = {i: set() for i in idx}
    for a, b in itertools.combinations(idx, 2):
        if exact.dot(rs.simple_roots[a - 1].vector, rs.simple_roots[b - 1].vector) != 0:
            adj[a].add(b)
            adj[b].add(a)
    comps = []
    unseen = set(idx)
    while unseen:
        start = min(unseen)
        comp = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        unseen -= comp
        comps.append(tuple(sorted(comp)))
    return comps


def _classify_component(rs: RootSystem, comp: tuple) -> tuple:
    """(family, rank) of one irreducible component, by rank, root count and
    simple-root lengths. D3 is reported as A3 and C2 as B2 (isomorphic)."""
    sub = SimpleSubrootSystem(rs, comp)
    m = sub.m
    count = len(sub.roots)
    norms = [exact.norm_sq(g.vector) for g in sub.simple_roots]
    distinct = sorted(set(norms))
    if len(distinct) == 1:
        if count == m * (m + 1):
            return ("A", m)
        if count == 2 * m * (m - 1):
            return ("D", m)
        if (m, count) in {(6, 72), (7, 126), (8, 240)}:
            return ("E", m)
    else:
        if m == 2 and count == 12:
            return ("G", 2)
        if m == 4 and count == 48:
            return ("F", 4)
        if m == 2 and count == 8:
            return ("B", 2)
        nlong = sum(1 for x in norms if x == distinct[-1])
        if nlong == m - 1:
            return ("B", m)
        if nlong == 1:
            return ("C", m)
    raise ValueError(f"unclassifiable component {comp} (rank {m}, {count} roots)")


def classify_simple_roots(rs: RootSystem, base_indices: tuple) -> str:
    """Isomorphism type label such as "A3", "B2", "A1xA1"."""
    comps = [_classify_component(rs, c) for c in _component_partition(rs, base_indices)]
    comps.sort(key=lambda fr: (-fr[1], fr[0]))
    return "x".join(f"{f}{r}" for f, r in comps)


@dataclass
class Lemma3Report:
    system: str
    rank: int
    root_count: int
    ratio: Fraction
    records: list  # RatioRecord per proper non-empty S
    holds: bool
    min_gap: Fraction | None
    violations: list

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "rank": self.rank,
            "root_count": self.root_count,
            "ratio": exact.format_fraction(self.ratio),
            "holds": self.holds,
            "min_gap": exact.format_fraction(self.min_gap) if self.min_gap is not None else None,
            "violations": [
                {"subsystem": v.subsystem, "m": v.m, "psi_size": v.psi_size,
                 "ratio": exact.format_fraction(v.sub_ratio)}
                for v in self.violations
            ],
            "subsystems_checked": len(self.records),
        }


def _proper_subsystem_records(rs) -> list:
    n = rs.rank
    ratio = Fraction(n, len(rs.roots))
    records = []
    for m in range(1, n):
        for S in itertools.combinations(range(1, n + 1), m):
            sub = SimpleSubrootSystem(rs, S)
            records.append(
                RatioRecord(
                    system=rs.label, rank=n, root_count=len(rs.roots), ratio=ratio,
                    subsystem=sub.type_label, m=m, psi_size=len(sub.roots),
                    sub_ratio=sub.ratio,
                )
            )
    return records


def lemma3_check(rs) -> Lemma3Report:
    """Exact check of n/|Phi| < m/|Psi| over every proper non-empty base
    subset. A violated inequality is reported, not raised."""
    ratio = Fraction(rs.rank, len(rs.roots))
    records = _proper_subsystem_records(rs)
    violations = [r for r in records if not ratio < r.sub_ratio]
    gaps = [r.sub_ratio - ratio for r in records]
    return Lemma3Report(
        system=rs.label,
        rank=rs.rank,
        root_count=len(rs.roots),
        ratio=ratio,
        records=records,
        holds=not violations,
        min_gap=min(gaps) if gaps else None,
        violations=violations,
    )


RANK1_EPSILON0 = Fraction(1, 2)


def epsilon0(rs: RootSystem) -> Fraction:
    """Half the minimal gap m/|Psi| - n/|Phi| over proper simple subsystems;
    rank-1 systems have none and get the documented 1/2 sentinel."""
    report = lemma3_check(rs)
    if report.min_gap is None:
        return RANK1_EPSILON0
    if report.min_gap <= 0:
        raise ValueError(f"{rs.label}: no positive gap (system reducible?)")
    return report.min_gap / 2


def _iter_families(max_rank: int):
    for n in range(2, max_rank + 1):
        yield ("A", n)
    for n in range(2, max_rank + 1):
        yield ("B", n)
    for n in range(3, max_rank + 1):
        yield ("C", n)
    for n in range(4, max_rank + 1):
        yield ("D", n)
    for n in (6, 7, 8):
        if n <= max_rank:
            yield ("E", n)
    if max_rank >= 4:
        yield ("F", 4)
    if max_rank >= 2:
        yield ("G", 2)


def appendix_a_table(max_rank: int) -> list:
    """Per irreducible system up to max_rank and per proper m: the
    maximal-|Psi| simple subsystems (all ties), as RatioRecords."""
    if max_rank < 2:
        raise ValueError("max_rank must be >= 2")
    rows = []
    for family, n in _iter_families(max_rank):
        rs = build_root_system(family, n)
        records = _proper_subsystem_records(rs)
        for m in range(1, n):
            group = [r for r in records if r.m == m]
            best = max(r.psi_size for r in group)
            seen = set()
            for r in group:
                if r.psi_size == best and r.subsystem not in seen:
                    seen.add(r.subsystem)
                    rows.append(r)
    return rows


def table_rows_as_dicts(rows: list) -> list:
    return [
        {
            "family": r.system,
            "rank": r.rank,
            "subsystem": r.subsystem,
            "m": r.m,
            "psi_size": r.psi_size,
            "ratio": exact.format_fraction(r.sub_ratio),
        }
        for r in rows
    ]


# The published ratio table: (parent family, parent ratio formula, subsystem
# family, subsystem ratio formula), instantiated over valid (n, m) pairs.
# Degenerate small-m labels are matched through canonical aliases
# (D3 ~ A3, D2 ~ A1xA1, B1/C1 ~ A1, C2 ~ B2).

def _alias(family: str, m: int) -> str:
    if family == "D" and m == 3:
        return "A3"
    if family == "D" and m == 2:
        return "A1xA1"
    if family in ("B", "C") and m == 1:
        return "A1"
    if family == "C" and m == 2:
        return "B2"
    return f"{family}{m}"


_PUBLISHED_ROWS = [
    # (parent_family, parent_rank_range, parent_ratio, sub_family, sub_ratio)
    ("A", lambda n: n >= 2, lambda n: Fraction(1, n + 1), "A", lambda m: Fraction(1, m + 1)),
    ("B", lambda n: n >= 2, lambda n: Fraction(1, 2 * n), "B", lambda m: Fraction(1, 2 * m)),
    ("C", lambda n: n >= 3, lambda n: Fraction(1, 2 * n), "C", lambda m: Fraction(1, 2 * m)),
    ("D", lambda n: n >= 4, lambda n: Fraction(1, 2 * (n - 1)), "D", lambda m: Fraction(1, 2 * (m - 1))),
]

_PUBLISHED_EXCEPTIONAL = [
    # (parent_label, parent_ratio, [(sub_family_or_label, m, sub_ratio), ...])
    ("E6", Fraction(1, 12), [("D", m, Fraction(1, 2 * (m - 1))) for m in range(2, 6)]),
    ("E7", Fraction(1, 18), [("D", m, Fraction(1, 2 * (m - 1))) for m in range(2, 7)]
     + [("E", 6, Fraction(1, 12))]),
    ("E8", Fraction(1, 30), [("D", m, Fraction(1, 2 * (m - 1))) for m in range(2, 8)]
     + [("E", 6, Fraction(1, 12)), ("E", 7, Fraction(1, 18))]),
    ("F4", Fraction(1, 12), [("B", m, Fraction(1, 2 * m)) for m in range(1, 4)]),
    ("G2", Fraction(1, 6), [("A", 1, Fraction(1, 2))]),
]


def verify_appendix_a(max_rank: int = 8) -> dict:
    """Instantiate every published table row at rank <= max_rank and check it
    against exhaustive subset enumeration: the parent ratio, the existence of
    a subsystem of the listed type with the listed ratio, and the strict
    inequality."""
    checks = []

    def check_instance(rs, records, parent_ratio, sub_family, m, sub_ratio):
        label = _alias(sub_family, m)
        matches = [r for r in records if r.m == m and r.subsystem == label]
        found = [r for r in matches if r.sub_ratio == sub_ratio]
        best = max((r.psi_size for r in records if r.m == m), default=0)
        ok = (
            Fraction(rs.rank, len(rs.roots)) == parent_ratio
            and bool(found)
            and all(parent_ratio < r.sub_ratio for r in found)
        )
        checks.append({
            "parent": rs.label,
            "parent_ratio": exact.format_fraction(parent_ratio),
            "subsystem": label,
            "m": m,
            "sub_ratio": exact.format_fraction(sub_ratio),
            "exists": bool(found),
            "maximal": bool(found) and found[0].psi_size == best,
            "ok": ok,
        })

    for family, rank_ok, parent_ratio_fn, sub_family, sub_ratio_fn in _PUBLISHED_ROWS:
        lo = {"A": 2, "B": 2, "C": 3, "D": 4}[family]
        for n in range(lo, max_rank + 1):
            if not rank_ok(n):
                continue
            rs = build_root_system(family, n)
            records = _proper_subsystem_records(rs)
            m_lo = 2 if sub_family == "D" else 1
            for m in range(m_lo, n):
                check_instance(rs, records, parent_ratio_fn(n), sub_family, m,
                               sub_ratio_fn(m))

    for parent_label, parent_ratio, subs in _PUBLISHED_EXCEPTIONAL:
        family, n = parent_label[0], int(parent_label[1:])
        if n > max_rank:
            continue
        rs = build_root_system(family, n)
        records = _proper_subsystem_records(rs)
        for sub_family, m, sub_ratio in subs:
            check_instance(rs, records, parent_ratio, sub_family, m, sub_ratio)

    return {
        "max_rank": max_rank,
        "instances": len(checks),
        "all_ok": all(c["ok"] for c in checks),
        "checks": checks,
    }
