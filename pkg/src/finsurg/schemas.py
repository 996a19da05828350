"""Pydantic request/response models for the service.

Rationals cross the wire as reduced "n/d" strings ("0" for zero, bare
integers when the denominator is 1); field order is fixed by declaration, so
serialized output is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


def fraction_str(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class DTableOut(BaseModel):
    kind: str
    p: int
    q: int
    values: list[str]


class CandidateOut(BaseModel):
    p: int
    q: int
    epsilon: int
    a: int
    b: int
    genus: int
    t_sequence: list[int]
    match_kind: Literal["torus", "cable", "hyperbolic", "unexpected"]
    match_params: str


class SearchRequest(BaseModel):
    p_max: int = Field(ge=1)
    mode: Literal["full", "pruned"] = "full"
    jobs: Optional[int] = Field(default=None, ge=1)


class SearchResponse(BaseModel):
    p_max: int
    mode: str
    count: int
    candidates: list[CandidateOut]


class TseqRequest(BaseModel):
    alexander: Optional[list[int]] = None
    torus: Optional[tuple[int, int]] = None
    cable: Optional[tuple[int, int, int, int]] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [x is not None for x in (self.alexander, self.torus, self.cable)]
        if sum(given) != 1:
            raise ValueError("provide exactly one of alexander, torus, cable")
        return self


class TseqResponse(BaseModel):
    alexander: list[int]
    genus: int
    admissible: bool
    t_sequence: Optional[list[int]] = None
    reason: Optional[str] = None


class VerifyRequest(BaseModel):
    suite: Literal["lens-tables", "lemma42", "pruning", "progression", "reconcile"]
    seed: int = 0


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    lines: list[str]


class CatalogEntryOut(BaseModel):
    p: int
    kind: Literal["torus", "cable", "hyperbolic"]
    params: str
    source: str


class CatalogResponse(BaseModel):
    p: int
    entries: list[CatalogEntryOut]


class HealthResponse(BaseModel):
    status: str
    version: str
