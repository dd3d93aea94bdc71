"""FastAPI service wrapping the verification core.

Root systems and Weyl groups are cached per process so repeated requests
(multiple CLI invocations against a running server, concurrent scans) reuse
the exact constructions; everything cached is immutable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
from fastapi import FastAPI, HTTPException, Query

from .. import analyzer, chambers, exact, subroots, weyl
from ..fourier import IntegrandSpec, NotRegularError, RegularPoint, mu_hat
from ..roots import (InvalidRootSystemError, ProductRootSystem,
                     parse_system_label, to_json_dict)
from . import models


@lru_cache(maxsize=64)
def _system(label: str):
    return parse_system_label(label)


@lru_cache(maxsize=16)
def _weyl_group(label: str, cap: int):
    return weyl.generate(_system(label), cap=cap)


def _fail(status: int, message: str, code: str):
    raise HTTPException(status_code=status,
                        detail={"message": message, "code": code})


def _get_system(label: str):
    try:
        return _system(label)
    except InvalidRootSystemError as e:
        _fail(400, str(e), "validation")


def _regular_point(rs, coords):
    """H0 from span-basis coordinates; defaults to the canonical direction."""
    if coords is None:
        h = rs.canonical_regular_point
    else:
        if len(coords) != rs.rank:
            _fail(400, f"h0/point needs {rs.rank} span coordinates, got {len(coords)}",
                  "validation")
        h = rs.from_span_coords(coords)
    try:
        return RegularPoint(rs, h)
    except NotRegularError as e:
        _fail(400, str(e), "validation")


def _integrand_spec(rs, h0_coords, k: str) -> IntegrandSpec:
    try:
        kf = Fraction(k)
    except (ValueError, ZeroDivisionError):
        _fail(400, f"cannot parse k = {k!r} as a rational", "validation")
    if kf < 1:
        _fail(400, f"k = {k} < 1", "validation")
    try:
        W = _weyl_group(rs.label, weyl.DEFAULT_CAP)
    except weyl.GroupTooLargeError as e:
        _fail(409, str(e), "cap_exceeded")
    h0 = _regular_point(rs, h0_coords)
    return IntegrandSpec(rs, W, h0, kf)


def create_app() -> FastAPI:
    app = FastAPI(title="weylscan", version="0.1.0")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/roots/info", response_model=models.RootSystemDoc)
    def roots_info(family: str = Query(...), rank: int = Query(...)):
        try:
            rs = _system(f"{family.upper()}{rank}")
        except InvalidRootSystemError as e:
            _fail(400, str(e), "validation")
        return to_json_dict(rs)

    @app.get("/weyl/order", response_model=models.OrderResponse)
    def weyl_order(family: str, rank: int, cap: int = weyl.DEFAULT_CAP):
        rs = _get_system(f"{family.upper()}{rank}")
        try:
            W = _weyl_group(rs.label, cap)
        except weyl.GroupTooLargeError as e:
            _fail(409, str(e), "cap_exceeded")
        return {"system": rs.label, "order": W.order}

    @app.get("/subroots/table", response_model=models.TableResponse)
    def subroots_table(max_rank: int = 8):
        if max_rank < 2:
            _fail(400, "max_rank must be >= 2", "validation")
        rows = subroots.table_rows_as_dicts(subroots.appendix_a_table(max_rank))
        return {"max_rank": max_rank, "rows": rows}

    @app.get("/threshold", response_model=models.ThresholdResponse)
    def threshold(system: str):
        rs = _get_system(system)
        if isinstance(rs, ProductRootSystem):
            ks = analyzer.reducible_k_star(rs)
            factors = [f.label for f in rs.factors]
        else:
            ks = analyzer.k_star(rs)
            factors = [rs.label]
        return {
            "system": rs.label,
            "k_star": exact.format_fraction(ks),
            "reducible": isinstance(rs, ProductRootSystem),
            "factors": factors,
        }

    @app.get("/epsilon0")
    def eps0(system: str):
        rs = _get_system(system)
        if isinstance(rs, ProductRootSystem):
            _fail(400, "epsilon0 is defined for irreducible systems", "validation")
        return {"system": rs.label,
                "epsilon0": exact.format_fraction(subroots.epsilon0(rs))}

    @app.post("/eval", response_model=models.EvalResponse)
    def eval_point(req: models.EvalRequest):
        rs = _get_system(req.system)
        spec = _integrand_spec(rs, req.h0, req.k)
        if len(req.point) != rs.rank:
            _fail(400, f"point needs {rs.rank} span coordinates", "validation")
        H = rs.from_span_coords(req.point)
        from ..fourier import integrand, numerator_A
        A = numerator_A(spec.W, spec.h0, H)
        denom = float((rs.positive_matrix @ H).prod())
        return {
            "system": rs.label,
            "h0": [float(x) for x in rs.to_span_coords(spec.h0.h0)],
            "point": list(req.point),
            "k": exact.format_fraction(spec.k),
            "A_re": A.real,
            "A_im": A.imag,
            "denom": denom,
            "integrand": integrand(spec, H),
        }

    @app.post("/scan")
    def scan(req: models.ScanRequest):
        rs = _get_system(req.system)
        if isinstance(rs, ProductRootSystem):
            _fail(400, "scan requires an irreducible system", "validation")
        spec = _integrand_spec(rs, req.h0, req.k)
        try:
            report = analyzer.convergence_scan(
                spec, shells=req.shells, r0=req.r0,
                samples=req.samples, seed=req.seed,
            )
        except ValueError as e:
            _fail(400, str(e), "validation")
        except analyzer.SamplingError as e:
            _fail(409, str(e), "sampling_failure")
        out = report.to_dict()
        out["system"] = rs.label
        return out

    def _lemma_setup(req_system: str, drop_index: int, grid: float):
        rs = _get_system(req_system)
        psi = subroots.simple_subsystem(rs, range(1, rs.rank + 1))
        try:
            psi1 = subroots.psi_one(psi, drop_position=drop_index)
        except IndexError as e:
            _fail(400, str(e), "validation")
        proj = chambers.averaging_projection(psi, psi1)
        try:
            cert = chambers.certify_constants(psi, psi1, proj, grid=grid)
        except chambers.CertificationError as e:
            _fail(409, str(e), "certification_failed")
        return rs, psi, psi1, cert

    @app.post("/lemma-constants", response_model=models.LemmaConstantsResponse)
    def lemma_constants(req: models.LemmaConstantsRequest):
        rs, psi, psi1, cert = _lemma_setup(req.system, req.drop_index, req.grid)
        return {
            "system": rs.label, "psi1": psi1.label,
            "a": cert.a, "b": cert.b, "C": cert.C,
            "grid": cert.grid, "certified": cert.certified,
        }

    @app.post("/verify/lemma1")
    def verify_lemma1(req: models.LemmaSampleRequest):
        rs, psi, psi1, cert = _lemma_setup(req.system, req.drop_index, req.grid)
        rep = chambers.region1_certificate(psi, psi1, cert, req.samples, req.seed)
        P = cert.matrix_float
        idem = float(np.abs(P @ P - P).max())
        sym = float(np.abs(P - P.T).max())
        span = psi.span_basis
        rank_p = int(np.linalg.matrix_rank(span @ P @ span.T, tol=1e-9))
        ok = (rep["violations_a"] == 0 and rep["violations_b"] == 0
              and rep["violations_cone"] == 0 and idem < 1e-12 and sym < 1e-12
              and rank_p == 1)
        return {
            "system": rs.label, "psi1": psi1.label,
            "a": cert.a, "b": cert.b,
            "projection_idempotency_error": idem,
            "projection_symmetry_error": sym,
            "projection_rank_on_span": rank_p,
            "samples": rep["samples"],
            "violations_a": rep["violations_a"],
            "violations_b": rep["violations_b"],
            "violations_cone": rep["violations_cone"],
            "holds": ok,
        }

    @app.post("/verify/lemma2")
    def verify_lemma2(req: models.LemmaSampleRequest):
        rs, psi, psi1, cert = _lemma_setup(req.system, req.drop_index, req.grid)
        rep = chambers.region1_certificate(psi, psi1, cert, req.samples, req.seed)
        return {
            "system": rs.label, "psi1": psi1.label, "C": cert.C,
            "samples": rep["samples"], "pair_checks": rep["pair_checks"],
            "violations_C": rep["violations_C"],
            "holds": rep["violations_C"] == 0,
        }

    @app.post("/verify/lemma3")
    def verify_lemma3(req: models.Lemma3Request):
        rs = _get_system(req.system)
        return subroots.lemma3_check(rs).to_dict()

    @app.post("/verify/appendix-a")
    def verify_appendix_a(req: models.AppendixARequest):
        if req.max_rank < 2:
            _fail(400, "max_rank must be >= 2", "validation")
        return subroots.verify_appendix_a(req.max_rank)

    @app.get("/corollaries", response_model=models.CorollaryResponse)
    def corollaries(system: str):
        rs = _get_system(system)
        if isinstance(rs, ProductRootSystem):
            _fail(400, "corollaries apply to irreducible systems", "validation")
        return analyzer.corollary_report(rs)

    @app.post("/probe/almost-period")
    def probe(req: models.ScanRequest):
        rs = _get_system(req.system)
        spec = _integrand_spec(rs, req.h0, req.k)
        try:
            p = analyzer.almost_period_probe(spec, seed=req.seed)
        except analyzer.SamplingError as e:
            _fail(409, str(e), "sampling_failure")
        out = p.to_dict()
        out["system"] = rs.label
        return out

    return app
