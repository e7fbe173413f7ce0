from typing import Any, Optional, Tuple

from pydantic import BaseModel, root_validator, validator

from app.core.config import settings
from app.engine.repbuild import BasisKind
from app.engine.rewrite import Strategy
from app.schemas.algebra import AlgebraSource, _check_scalar


class PhiRequest(AlgebraSource):
    m: int
    eta: Optional[Any] = None

    _eta_is_scalar = validator("eta", allow_reuse=True)(_check_scalar)

    @validator("m")
    def m_is_natural(cls, v):
        if v < 0:
            raise ValueError("m must be >= 0")
        return v


class CasimirRequest(AlgebraSource):
    max_degree: Optional[int] = None
    # eigenvalues s^m rho(eta) for m < dim, when both are given
    eta: Optional[Any] = None
    dim: Optional[int] = None

    _eta_is_scalar = validator("eta", allow_reuse=True)(_check_scalar)


class DimsRequest(AlgebraSource):
    n_max: int
    interval: Optional[Tuple[float, float]] = None
    scan_steps: Optional[int] = None
    root_tol: Optional[float] = None
    side_tol: Optional[float] = None
    want_complex: bool = False
    jobs: int = settings.DEFAULT_JOBS

    @validator("n_max", "jobs")
    def positive(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v


class ModuleRequest(AlgebraSource):
    n: int
    eta: Any
    basis: BasisKind = BasisKind.unnormalized

    _eta_is_scalar = validator("eta", allow_reuse=True)(_check_scalar)

    @validator("n")
    def n_positive(cls, v):
        if v < 1:
            raise ValueError("n must be >= 1")
        return v


class RepRequest(ModuleRequest):
    pass


class VerifyRequest(ModuleRequest):
    tol: Optional[float] = None
    root_of_unity: Optional[int] = None

    @validator("root_of_unity")
    def k_positive(cls, v):
        if v is not None and v < 1:
            raise ValueError("root_of_unity must be >= 1")
        return v


class OracleRequest(AlgebraSource):
    word: Optional[str] = None
    m: Optional[int] = None
    strategy: Strategy = Strategy.leftmost

    @root_validator(skip_on_failure=True)
    def word_or_m(cls, values):
        if (values.get("word") is None) == (values.get("m") is None):
            raise ValueError("give exactly one of word or m")
        return values


class TableRequest(AlgebraSource):
    m_max: int = 5

    @validator("m_max")
    def m_max_positive(cls, v):
        if v < 1:
            raise ValueError("m_max must be >= 1")
        return v

    @validator("preset", always=True)
    def needs_preset(cls, v):
        if v is None:
            raise ValueError("table comparison needs a preset")
        return v


class CliConfig(BaseModel):
    """Output options shared by every subcommand."""

    output: Optional[str] = None
    pretty: bool = False
    log_level: Optional[str] = None
