"""Chamber cones, the wall regions R_i, the averaging projection, and
grid-certified positivity constants.

The projection P averages the reflection subgroup generated by Psi_1 and
equals (exactly, in rational arithmetic) the orthogonal projection onto the
orthocomplement of span(Psi_1). The constants a (lower bound for |P H|/|H| on
R_1) and C (lower bound for <H, alpha>/|H| over the roots outside Psi_1) are
certified by a simplex grid search on the spherical sector with an explicit
Lipschitz slack, so a positive reported value is a true lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact, weyl
from .subroots import EmptySubrootSystem, SimpleSubrootSystem, psi_one


class CertificationError(RuntimeError):
    """Grid too coarse to certify a positive minimum."""


class ChamberError(ValueError):
    pass


@dataclass(frozen=True)
class ChamberSpec:
    """Open cone {H : <H, normal_i> > 0 for all i}."""

    normals: tuple  # float (k, d) array rows

    @staticmethod
    def of(system) -> "ChamberSpec":
        return ChamberSpec(tuple(tuple(float(c) for c in g.vector)
                                 for g in system.simple_roots))

    def contains(self, H) -> bool:
        H = np.asarray(H, dtype=float)
        N = np.array(self.normals)
        if H.shape[0] != N.shape[1]:
            raise ChamberError(
                f"dimension mismatch: point has {H.shape[0]}, normals have {N.shape[1]}"
            )
        return bool(np.all(N @ H > 0))


def in_chamber(spec: ChamberSpec, H) -> bool:
    return spec.contains(H)


def region_index(psi: SimpleSubrootSystem, H, tol: float = 1e-12):
    """Smallest i with H in R_i; None inside the unit ball. H must lie in the
    closure of the chamber of Psi."""
    H = np.asarray(H, dtype=float)
    dots = psi.gamma_matrix @ H
    if np.any(dots < -tol):
        raise ChamberError("point outside the closed chamber of Psi")
    if H @ H < 1.0 - tol:
        return None
    best = dots.max()
    return int(np.argmax(dots >= best - tol)) + 1


@dataclass
class ChamberProjection:
    """Averaging projection with (optionally) certified constants."""

    matrix: tuple  # exact ambient matrix
    psi: SimpleSubrootSystem
    psi1: object
    a: float | None = None
    b: float | None = None
    C: float | None = None
    grid: float | None = None
    certified: bool = False

    @property
    def matrix_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])


def averaging_projection(psi: SimpleSubrootSystem, psi1) -> ChamberProjection:
    """P = (1/|V1|) sum over the reflection subgroup of Psi_1, exact."""
    if not psi1.is_empty:
        if not set(psi1.base_indices) <= set(psi.base_indices):
            raise ValueError("Psi_1 is not a subsystem of Psi")
    rs = psi.parent
    d = rs.ambient_dim
    if psi1.is_empty:
        P = exact.identity(d)
        return ChamberProjection(P, psi, psi1)
    V1 = weyl.generate(rs, base_indices=psi1.base_indices)
    P = exact.mat_scale(0, exact.identity(d))
    for w in V1.elements:
        P = exact.mat_add(P, w.matrix)
    P = exact.mat_scale(Fraction(1, V1.order), P)
    return ChamberProjection(P, psi, psi1)


def _simplex_grid(m: int, steps: int) -> np.ndarray:
    """All nonnegative integer m-tuples summing to `steps`, scaled to the
    standard simplex; shape (count, m)."""
    if m == 1:
        return np.ones((1, 1))
    grids = []
    # iterative composition enumeration, vectorized per leading coordinate
    def rec(prefix, remaining, depth):
        if depth == m - 1:
            grids.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, depth + 1)
    rec([], steps, 0)
    return np.array(grids, dtype=float) / steps


def certify_constants(psi: SimpleSubrootSystem, psi1, projection: ChamberProjection | None = None,
                      grid: float = 1e-3) -> ChamberProjection:
    """Certified a, b = 1/a + 1, and C on cl(R_1) by padded grid minimization.

    R_1 is the part of the closed chamber of Psi where the designated first
    simple root has the largest inner product. The grid lives on the simplex
    of dual-basis (coweight) coordinates; every unit vector of cl(R_1) is the
    normalization of a simplex point, so a covering grid plus Lipschitz slack
    yields true lower bounds.
    """
    if projection is None:
        projection = averaging_projection(psi, psi1)
    m = psi.m
    gammas = psi.gamma_matrix  # (m, d)
    omegas = np.array([[float(c) for c in v] for v in psi.dual_basis_exact])  # (m, d)
    steps = max(2, int(round(1.0 / grid)))
    h = 1.0 / steps
    from math import comb
    n_points = comb(steps + m - 1, m - 1)
    if n_points > 5_000_000:
        raise CertificationError(
            f"grid spacing {h} yields {n_points} simplex points for m={m}; "
            "coarsen the grid (the slack scales linearly, so coarser grids "
            "still certify when the true minimum is not tiny)"
        )
    T = _simplex_grid(m, steps)  # (N, m)
    X = T @ omegas  # simplex points in span(Psi)

    wmax = float(np.max(np.linalg.norm(omegas, axis=1)))
    delta1 = m * h  # l1 covering radius of the simplex lattice

    norms = np.linalg.norm(X, axis=1)
    xmin = float(norms.min()) - wmax * delta1
    if xmin <= 0:
        raise CertificationError(
            f"grid spacing {h} too coarse: cannot certify the simplex stays "
            "away from the origin; refine the grid"
        )
    u_lip = 2.0 * wmax / xmin  # Lipschitz bound for t -> X(t)/|X(t)| in l1

    # R_1 membership, relaxed by the covering slack so cl(R_1) is covered
    dots = X @ gammas.T  # (N, m); column j = <gamma_j, X>
    gnorm = np.linalg.norm(gammas, axis=1)
    slack_cons = (gnorm[0] + gnorm) * wmax * delta1
    mask = np.all(dots[:, [0]] - dots >= -slack_cons[None, :], axis=1)
    if not mask.any():
        raise CertificationError("grid produced no points covering R_1; refine the grid")
    U = X[mask] / norms[mask, None]

    P = projection.matrix_float
    a_min = float(np.linalg.norm(U @ P.T, axis=1).min())
    a_cert = a_min - u_lip * delta1
    if a_cert <= 0:
        raise CertificationError(
            f"cannot certify a > 0 at grid {h} (raw min {a_min:.3g}, "
            f"slack {u_lip * delta1:.3g}); refine the grid"
        )

    bad_roots = [r for r in psi.positive_roots
                 if r.base_coefficients not in
                 {q.base_coefficients for q in psi1.positive_roots}]
    A = np.array([[float(c) for c in r.vector] for r in bad_roots])  # (nb, d)
    vals = U @ A.T  # (N1, nb)
    raw = vals.min(axis=0)  # per root
    slack_roots = np.linalg.norm(A, axis=1) * u_lip * delta1
    c_per_root = raw - slack_roots
    C_cert = float(c_per_root.min())
    if C_cert <= 0:
        worst = bad_roots[int(np.argmin(c_per_root))]
        raise CertificationError(
            f"cannot certify C > 0 at grid {h} (worst root {worst.base_coefficients}); "
            "refine the grid"
        )

    return ChamberProjection(
        matrix=projection.matrix, psi=psi, psi1=psi1,
        a=a_cert, b=1.0 / a_cert + 1.0, C=C_cert, grid=h, certified=True,
    )


def sample_region1(psi: SimpleSubrootSystem, count: int, seed: int,
                   r_range=(1.0, 10.0)) -> np.ndarray:
    """Rejection-sample points of R_1: directions uniform on the sphere of
    span(Psi), kept when they lie in the closed chamber with gamma_1 the
    argmax, radius uniform in r_range."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, psi.m, count]))
    basis = psi.span_basis  # (m, d)
    gammas = psi.gamma_matrix
    out = []
    have = 0
    while have < count:
        batch = max(4096, 4 * (count - have))
        Z = rng.standard_normal((batch, psi.m))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        H = Z @ basis  # (batch, d)
        dots = H @ gammas.T
        ok = np.all(dots > 0, axis=1) & np.all(dots[:, [0]] >= dots, axis=1)
        acc = H[ok]
        radii = rng.uniform(*r_range, size=batch)[ok]
        out.append(acc * radii[:, None])
        have += acc.shape[0]
    return np.concatenate(out)[:count]


def region1_certificate(psi: SimpleSubrootSystem, psi1, constants: ChamberProjection,
                        samples: int, seed: int, tol: float = 1e-12) -> dict:
    """Sampled check of the lemma-1 norm bounds and the lemma-2 wall-distance
    bound with the certified constants; returns violation counts (expected
    zero)."""
    H = sample_region1(psi, samples, seed)
    P = constants.matrix_float
    PH = H @ P.T
    n_h = np.linalg.norm(H, axis=1)
    n_ph = np.linalg.norm(PH, axis=1)
    n_qh = np.linalg.norm(H - PH, axis=1)
    viol_a = int(np.sum(n_ph < constants.a * n_h - tol))
    viol_b = int(np.sum(n_qh > constants.b * n_ph + tol))
    psi1_pos = {q.base_coefficients for q in psi1.positive_roots}
    bad_roots = np.array([[float(c) for c in r.vector]
                          for r in psi.positive_roots
                          if r.base_coefficients not in psi1_pos])
    vals = H @ bad_roots.T
    viol_c = int(np.sum(vals < constants.C * n_h[:, None] - tol))
    # cone property: (I - P) maps R_1 into the closed chamber of Psi_1
    if psi1.is_empty:
        viol_cone = 0
    else:
        QH = H - PH
        g1 = np.array([[float(c) for c in g.vector] for g in psi1.simple_roots])
        viol_cone = int(np.sum((QH @ g1.T) < -1e-12))
    return {
        "samples": samples,
        "violations_a": viol_a,
        "violations_b": viol_b,
        "violations_C": viol_c,
        "violations_cone": viol_cone,
        "pair_checks": int(vals.size),
    }
