"""Small exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices tuples of row tuples. Everything
here is meant for dimensions <= 9, so plain Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(*entries) -> tuple:
    return tuple(frac(e) for e in entries)


def dot(u, v) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u) -> tuple:
    c = frac(c)
    return tuple(c * a for a in u)


def norm_sq(u) -> Fraction:
    return dot(u, u)


def is_zero(u) -> bool:
    return all(a == 0 for a in u)


def identity(n) -> tuple:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def transpose(m) -> tuple:
    return tuple(zip(*m))


def mat_vec(m, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, m) -> tuple:
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in m)


def solve(a, b) -> tuple:
    """Solve a x = b exactly; raises ValueError on a singular system."""
    n = len(a)
    aug = [list(row) + [frac(x)] for row, x in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def inverse(a) -> tuple:
    n = len(a)
    cols = [solve(a, tuple(Fraction(1) if i == j else Fraction(0) for i in range(n)))
            for j in range(n)]
    return transpose(cols)


def determinant(a) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def format_fraction(x: Fraction) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
