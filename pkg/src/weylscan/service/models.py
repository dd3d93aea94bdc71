"""Pydantic request/response schemas for the verification service.

Rationals travel as "p/q" strings so golden outputs never drift.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class RootSystemDoc(BaseModel):
    family: str
    rank: int
    ambient_dim: int
    simple_roots: list[list[str]]
    positive_roots: list[list[str]]
    cartan: list[list[int]]


class OrderResponse(BaseModel):
    system: str
    order: int


class TableRow(BaseModel):
    family: str
    rank: int
    subsystem: str
    m: int
    psi_size: int
    ratio: str


class TableResponse(BaseModel):
    max_rank: int
    rows: list[TableRow]


class ThresholdResponse(BaseModel):
    system: str
    k_star: str
    reducible: bool
    factors: list[str]


class EvalRequest(BaseModel):
    system: str
    point: list[float]
    k: str = "1"
    h0: list[float] | None = None


class EvalResponse(BaseModel):
    system: str
    h0: list[float]
    point: list[float]
    k: str
    A_re: float
    A_im: float
    denom: float
    integrand: float


class ScanRequest(BaseModel):
    system: str
    k: str
    h0: list[float] | None = None
    shells: int = 12
    samples: int = Field(default=100_000, ge=1000)
    seed: int
    r0: float = 1.0


class LemmaConstantsRequest(BaseModel):
    system: str
    drop_index: int = 1
    grid: float = 1e-3


class LemmaConstantsResponse(BaseModel):
    system: str
    psi1: str
    a: float
    b: float
    C: float
    grid: float
    certified: bool


class LemmaSampleRequest(BaseModel):
    system: str
    drop_index: int = 1
    grid: float = 1e-3
    samples: int = 10_000
    seed: int = 0


class Lemma3Request(BaseModel):
    system: str


class AppendixARequest(BaseModel):
    max_rank: int = 8


class CorollaryResponse(BaseModel):
    system: str
    k_star: str
    corollary1_holds: bool
    boundary_equality: bool
    dim: int
    rank: int
    corollary2_exponent: str
    lp_range: str


class ErrorBody(BaseModel):
    message: str
    code: str
