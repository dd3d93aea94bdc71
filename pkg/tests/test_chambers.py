import math

import numpy as np
import pytest

from weylscan import exact
from weylscan.chambers import (CertificationError, ChamberError, ChamberSpec,
                               averaging_projection, certify_constants,
                               region1_certificate, region_index,
                               sample_region1)
from weylscan.subroots import psi_one, simple_subsystem


def _full_psi(system):
    return simple_subsystem(system, tuple(range(1, system.rank + 1)))


def test_chamber_contains(rs):
    system = rs("A", 2)
    spec = ChamberSpec.of(system)
    interior = np.array([float(c) for c in system.canonical_regular_point])
    assert spec.contains(interior)
    assert not spec.contains(-interior)
    # points on a wall are excluded (open cone)
    b1 = np.array([float(c) for c in system.simple_roots[0].vector])
    wall = np.array([1.0, 1.0, -2.0]) / math.sqrt(6)  # orthogonal to beta_1
    assert abs(wall @ b1) < 1e-12
    assert not spec.contains(wall)


def test_chamber_dimension_mismatch(rs):
    with pytest.raises(ChamberError):
        ChamberSpec.of(rs("A", 2)).contains(np.ones(2))


def test_region_index_basics(rs):
    system = rs("B", 2)
    psi = _full_psi(system)
    omegas = np.array([[float(c) for c in v] for v in psi.dual_basis_exact])
    # deep along coweight 1: gamma_1 dominates
    assert region_index(psi, 5 * omegas[0] / np.linalg.norm(omegas[0])) == 1
    assert region_index(psi, 5 * omegas[1] / np.linalg.norm(omegas[1])) == 2
    # inside the unit ball: no region
    assert region_index(psi, 0.1 * omegas[0]) is None


def test_region_index_tie_prefers_smallest(rs):
    system = rs("A", 2)
    psi = _full_psi(system)
    omegas = np.array([[float(c) for c in v] for v in psi.dual_basis_exact])
    H = omegas.sum(axis=0)
    H *= 5 / np.linalg.norm(H)
    dots = psi.gamma_matrix @ H
    assert abs(dots[0] - dots[1]) < 1e-12
    assert region_index(psi, H) == 1


def test_region_index_rejects_outside_chamber(rs):
    psi = _full_psi(rs("A", 2))
    H = -np.array([float(c) for c in rs("A", 2).canonical_regular_point])
    with pytest.raises(ChamberError):
        region_index(psi, 5 * H)


def test_regions_cover_chamber_exterior(rs):
    system = rs("B", 3)
    psi = _full_psi(system)
    H = sample_region1(psi, 200, seed=5)  # all in R_1 by construction
    assert all(region_index(psi, h) == 1 for h in H)


def test_averaging_projection_is_exact_projection(rs):
    for fam, rank in [("A", 2), ("B", 2), ("B", 3)]:
        psi = _full_psi(rs(fam, rank))
        psi1 = psi_one(psi)
        proj = averaging_projection(psi, psi1)
        P = proj.matrix
        assert exact.mat_mul(P, P) == P
        assert exact.transpose(P) == P


def test_averaging_projection_kills_psi1_span(rs):
    psi = _full_psi(rs("B", 3))
    psi1 = psi_one(psi)
    P = averaging_projection(psi, psi1).matrix
    for g in psi1.simple_roots:
        assert exact.is_zero(exact.mat_vec(P, g.vector))


def test_averaging_projection_fixes_orthocomplement(rs):
    psi = _full_psi(rs("A", 3))
    psi1 = psi_one(psi)
    # omega_1 is orthogonal to every root of Psi_1, hence fixed by P
    omega1 = psi.dual_basis_exact[0]
    P = averaging_projection(psi, psi1).matrix
    assert exact.mat_vec(P, omega1) == tuple(omega1)


def test_averaging_projection_empty_psi1_is_identity(rs):
    psi = simple_subsystem(rs("A", 2), (1,))
    proj = averaging_projection(psi, psi_one(psi))
    assert proj.matrix == exact.identity(3)


def test_projection_rank_on_span(rs):
    psi = _full_psi(rs("B", 3))
    psi1 = psi_one(psi)
    P = averaging_projection(psi, psi1).matrix_float
    span = psi.span_basis  # (m, d)
    assert np.linalg.matrix_rank(span @ P @ span.T, tol=1e-10) == 1


def test_certified_constants_a2_vs_arc_sweep(rs):
    """Independent oracle: on A2, R_1 is a 30-degree arc; minimize |PH| and
    <H, alpha> directly over a dense sweep and compare."""
    psi = _full_psi(rs("A", 2))
    psi1 = psi_one(psi)
    proj = certify_constants(psi, psi1, grid=2e-4)
    assert proj.certified
    assert abs(proj.b - (1.0 / proj.a + 1.0)) < 1e-12

    span = psi.span_basis
    gammas = psi.gamma_matrix
    P = proj.matrix_float
    theta = np.linspace(0, 2 * np.pi, 2_000_001)
    U = np.stack([np.cos(theta), np.sin(theta)], axis=1) @ span
    dots = U @ gammas.T
    in_r1 = np.all(dots >= 0, axis=1) & (dots[:, 0] >= dots[:, 1])
    U = U[in_r1]
    a_true = np.linalg.norm(U @ P.T, axis=1).min()
    psi1_pos = {q.base_coefficients for q in psi1.positive_roots}
    bad = np.array([[float(c) for c in r.vector] for r in psi.positive_roots
                    if r.base_coefficients not in psi1_pos])
    c_true = (U @ bad.T).min()
    # certified values are true lower bounds and close to the real minima
    assert 0 < proj.a <= a_true + 1e-9
    assert a_true - proj.a < 5e-3
    assert 0 < proj.C <= c_true + 1e-9
    assert c_true - proj.C < 5e-3


def test_certify_coarse_grid_fails(rs):
    psi = _full_psi(rs("B", 3))
    with pytest.raises(CertificationError):
        certify_constants(psi, psi_one(psi), grid=0.5)


def test_certify_guards_grid_explosion(rs):
    psi = _full_psi(rs("F", 4))
    with pytest.raises(CertificationError, match="simplex points"):
        certify_constants(psi, psi_one(psi), grid=1e-5)


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 2), ("A", 3), ("B", 3)])
def test_certificate_no_sampled_violations(rs, family, rank):
    psi = _full_psi(rs(family, rank))
    psi1 = psi_one(psi)
    proj = certify_constants(psi, psi1, grid=1e-3)
    cert = region1_certificate(psi, psi1, proj, samples=2000, seed=11)
    assert cert["violations_a"] == 0
    assert cert["violations_b"] == 0
    assert cert["violations_C"] == 0
    assert cert["violations_cone"] == 0
    assert cert["pair_checks"] > 0


def test_sample_region1_deterministic_and_in_region(rs):
    psi = _full_psi(rs("B", 2))
    H1 = sample_region1(psi, 500, seed=3)
    H2 = sample_region1(psi, 500, seed=3)
    assert np.array_equal(H1, H2)
    dots = H1 @ psi.gamma_matrix.T
    assert np.all(dots > 0)
    assert np.all(dots[:, [0]] >= dots)
    radii = np.linalg.norm(H1, axis=1)
    assert radii.min() >= 1.0 and radii.max() <= 10.0
