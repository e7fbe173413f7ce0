"""Commands shared by the CLI and the HTTP service.

Each takes a request schema and returns a JSON-ready dict; engine errors
propagate as AlgebraError subclasses for the caller to map.
"""
import logging
from typing import Any, Callable, Dict, List, Optional, TypeVar

import pydantic

from app.core.errors import (
    ClosureError,
    InvalidParamError,
    NoSolutionInAnsatzError,
    UnsupportedCoefficientError,
)
from app.engine.algebra import AlgebraSpec, phi_numeric, phi_symbolic
from app.engine.casimir import (
    casimir_eigenvalue,
    casimir_matrix,
    check_casimir_matrix,
    check_root_of_unity_casimir,
    solve_rho,
)
from app.engine.catalog import compare_with_table, list_presets
from app.engine.exppoly import ExpPoly
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    join_modes,
    mode_of,
    parse_scalar,
    promote,
)
from app.engine.repbuild import BasisKind, build_module, change_of_basis, find_dimensions, verify_module
from app.engine.rewrite import NOWord, normal_order, phi_via_rewriting
from app.schemas.algebra import AlgebraSource
from app.schemas.requests import (
    CasimirRequest,
    DimsRequest,
    OracleRequest,
    PhiRequest,
    RepRequest,
    TableRequest,
    VerifyRequest,
)
from app.schemas.search import RootSearchConfig

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _run(source: AlgebraSource, fn: Callable[[AlgebraSpec], T]) -> T:
    """Resolve the algebra and run ``fn``; retry in real mode on ClosureError if allowed."""
    try:
        return fn(source.resolve())
    except ClosureError as exc:
        if not source.float_fallback or (source.mode or ScalarMode.exact) is not ScalarMode.exact:
            raise
        logger.warning("%s; retrying in real mode", exc)
        return fn(source.resolve(ScalarMode.real))


def _eta(spec: AlgebraSpec, raw: Any) -> Scalar:
    eta = parse_scalar(raw)
    if spec.mode is not ScalarMode.exact:
        eta = promote(eta, join_modes(spec.mode, mode_of(eta)))
    return eta


def _header(spec: AlgebraSpec) -> Dict[str, Any]:
    return {"algebra": spec.name, "mode": spec.mode.value}


def _try_rho(spec: AlgebraSpec) -> Optional[ExpPoly]:
    try:
        return solve_rho(spec).rho
    except (NoSolutionInAnsatzError, ClosureError) as exc:
        logger.info("no Casimir function for %s: %s", spec.name, exc)
        return None


def cmd_list_presets() -> Dict[str, Any]:
    return {"presets": list_presets()}


def cmd_phi(req: PhiRequest) -> Dict[str, Any]:
    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        data = _header(spec)
        data["m"] = req.m
        if req.eta is None:
            phi = phi_symbolic(spec, req.m)
            data.update(phi=phi.to_json(), text=str(phi))
        else:
            eta = _eta(spec, req.eta)
            data.update(eta=format_scalar(eta), value=format_scalar(phi_numeric(spec, eta, req.m)))
        return data

    return _run(req, run)


def cmd_casimir(req: CasimirRequest) -> Dict[str, Any]:
    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        solution = solve_rho(spec, req.max_degree)
        data = _header(spec)
        data.update(solution.to_json())
        data["text"] = str(solution.rho)
        if req.eta is not None and req.dim is not None:
            eta = _eta(spec, req.eta)
            data["eta"] = format_scalar(eta)
            data["eigenvalues"] = [
                format_scalar(casimir_eigenvalue(spec, solution.rho, eta, m)) for m in range(req.dim)
            ]
        return data

    return _run(req, run)


def _search_config(req: DimsRequest) -> RootSearchConfig:
    overrides = {
        "real_interval": req.interval,
        "scan_steps": req.scan_steps,
        "root_tol": req.root_tol,
        "side_tol": req.side_tol,
    }
    try:
        return RootSearchConfig(
            want_complex=req.want_complex, **{k: v for k, v in overrides.items() if v is not None}
        )
    except pydantic.ValidationError as exc:
        raise InvalidParamError(str(exc)) from exc


def cmd_dims(req: DimsRequest) -> Dict[str, Any]:
    cfg = _search_config(req)

    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        results = find_dimensions(spec, req.n_max, cfg, req.jobs)
        data = _header(spec)
        data["n_max"] = req.n_max
        data["results"] = [r.to_json() for r in results]
        data["multiplicities"] = {str(r.N): len(r.valid_roots) for r in results}
        return data

    return _run(req, run)


def cmd_rep(req: RepRequest) -> Dict[str, Any]:
    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        rep = build_module(spec, _eta(spec, req.eta), req.n, req.basis)
        data = _header(spec)
        data.update(rep.to_json())
        rho = _try_rho(spec)
        if rho is not None:
            data["rho"] = rho.to_json()
            data["Casimir"] = casimir_matrix(rep, rho).to_json()
        if rep.basis_kind is BasisKind.normalized:
            data["change_of_basis"] = change_of_basis(rep).to_json()
        return data

    return _run(req, run)


def cmd_verify(req: VerifyRequest) -> Dict[str, Any]:
    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        rep = build_module(spec, _eta(spec, req.eta), req.n, req.basis)
        report = verify_module(rep, req.tol)
        rho = _try_rho(spec)
        if rho is not None:
            report.merge(check_casimir_matrix(rep, rho, req.tol))
        if req.root_of_unity is not None:
            if rho is None:
                report.add_flag("d_casimir", False, "no Casimir function to build D from")
            else:
                report.merge(check_root_of_unity_casimir(rep, rho, req.root_of_unity, req.tol))
        data = _header(spec)
        data.update(eta=format_scalar(rep.eta), N=rep.dim, basis_kind=rep.basis_kind.value)
        data["report"] = report.to_json()
        data["casimir_checked"] = rho is not None
        data["ok"] = report.ok
        return data

    return _run(req, run)


def _monomials(form) -> Optional[List[Dict[str, Any]]]:
    try:
        monomials = form.monomials()
    except UnsupportedCoefficientError:
        return None
    return [
        {"jplus": m, "jzero": n, "jminus": p, "coefficient": format_scalar(c)}
        for (m, n, p), c in sorted(monomials.items())
    ]


def cmd_oracle(req: OracleRequest) -> Dict[str, Any]:
    def run(spec: AlgebraSpec) -> Dict[str, Any]:
        data = _header(spec)
        if req.word is not None:
            word = NOWord.parse(req.word)
            form = normal_order(word, spec, req.strategy)
            data.update(word=str(word), strategy=req.strategy.value, normal_form=form.to_json())
            data["monomials"] = _monomials(form)
            return data
        via_rewriting = phi_via_rewriting(spec, req.m)
        direct = phi_symbolic(spec, req.m)
        if spec.mode is ScalarMode.exact:
            agrees = via_rewriting == direct
        else:
            agrees = via_rewriting.isclose(direct)
        data.update(
            m=req.m,
            phi_rewriting=via_rewriting.to_json(),
            phi_symbolic=direct.to_json(),
            agrees=agrees,
        )
        return data

    return _run(req, run)


def cmd_table(req: TableRequest) -> Dict[str, Any]:
    report = compare_with_table(req.preset, req.params, req.m_max, req.mode or ScalarMode.exact)
    return report.to_json()


__all__ = [
    "cmd_casimir",
    "cmd_dims",
    "cmd_list_presets",
    "cmd_oracle",
    "cmd_phi",
    "cmd_rep",
    "cmd_table",
    "cmd_verify",
]
