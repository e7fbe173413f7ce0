from typing import Any, Dict

from fastapi import APIRouter

from app.commands import (
    cmd_casimir,
    cmd_dims,
    cmd_oracle,
    cmd_phi,
    cmd_rep,
    cmd_table,
    cmd_verify,
)
from app.schemas.requests import (
    CasimirRequest,
    DimsRequest,
    OracleRequest,
    PhiRequest,
    RepRequest,
    TableRequest,
    VerifyRequest,
)

router = APIRouter()


@router.post("/phi", response_model=Dict[str, Any], summary="Structure function Phi(eta, m)")
def phi(request: PhiRequest) -> Any:
    """
    Phi as an exponential polynomial in eta, or its value when **eta** is given.
    """
    return cmd_phi(request)


@router.post("/casimir", response_model=Dict[str, Any], summary="Casimir function rho")
def casimir(request: CasimirRequest) -> Any:
    return cmd_casimir(request)


@router.post("/dims", response_model=Dict[str, Any], summary="Finite-dimensional modules")
def dims(request: DimsRequest) -> Any:
    """
    Roots of Phi(eta, N) for N = 1..**n_max**, each marked valid when
    Phi(eta, m) != 0 for 0 < m < N.
    """
    return cmd_dims(request)


@router.post("/rep", response_model=Dict[str, Any], summary="Representation matrices")
def rep(request: RepRequest) -> Any:
    return cmd_rep(request)


@router.post("/verify", response_model=Dict[str, Any], summary="Check a module")
def verify(request: VerifyRequest) -> Any:
    """
    Residuals of the defining relations on the module; **ok** is false when
    any check fails.
    """
    return cmd_verify(request)


@router.post("/oracle", response_model=Dict[str, Any], summary="Normal ordering by rewriting")
def oracle(request: OracleRequest) -> Any:
    return cmd_oracle(request)


@router.post("/table", response_model=Dict[str, Any], summary="Compare with the tabulated Phi")
def table(request: TableRequest) -> Any:
    return cmd_table(request)
