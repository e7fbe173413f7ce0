"""Lowest-weight modules: matrices of J+, J0, J- on the bases F(eta, m)
and phi(eta, m), the matrix identities they must satisfy, and the search
for finite-dimensional modules among the roots of Phi(., N)."""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import (
    DegenerateWeightError,
    InvalidParamError,
    UnsupportedRootClassError,
    ZeroPolynomialError,
)
from app.engine.algebra import AlgebraSpec, phi_symbolic, phi_values, weights
from app.engine.exppoly import ExpPoly
from app.engine.linalg import Matrix, apply_exppoly_to_diagonal
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    is_zero,
    join_modes,
    magnitude,
    mode_of,
    sign,
)
from app.engine.reports import CheckReport
from app.engine.rootfind import exp_real_roots, numeric_poly_roots, rational_roots
from app.schemas.search import RootSearchConfig

logger = logging.getLogger(__name__)


class BasisKind(str, Enum):
    unnormalized = "unnormalized"
    normalized = "normalized"


@dataclass(frozen=True)
class ModuleRep:
    spec: AlgebraSpec
    eta: Scalar
    dim: int
    basis_kind: BasisKind
    jplus: Matrix
    jzero: Matrix
    jminus: Matrix
    weights: Tuple[Scalar, ...]
    phis: Tuple[Scalar, ...]

    @property
    def mode(self) -> ScalarMode:
        return join_modes(self.jplus.mode, self.jzero.mode, self.jminus.mode)

    def factorials(self) -> List[Scalar]:
        """[eta, m]! = |Phi(eta, 1)| ... |Phi(eta, m)| for m = 0..N-1."""
        out: List[Scalar] = [Fraction(1)]
        for m in range(1, self.dim):
            out.append(out[-1] * magnitude(self.phis[m]))
        return out

    def generators(self) -> Dict[str, Matrix]:
        return {"Jplus": self.jplus, "Jzero": self.jzero, "Jminus": self.jminus}

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.spec.name,
            "eta": format_scalar(self.eta),
            "dim": self.dim,
            "basis_kind": self.basis_kind.value,
            "Jplus": self.jplus.to_json(),
            "Jzero": self.jzero.to_json(),
            "Jminus": self.jminus.to_json(),
            "weights": [format_scalar(w) for w in self.weights],
            "phis": [format_scalar(p) for p in self.phis],
            "factorials": [format_scalar(x) for x in self.factorials()],
        }


def side_condition_failure(phis: Sequence[Scalar], n: int, side_tol: float) -> Optional[int]:
    """First m in 1..n-1 with Phi(eta, m) = 0, or None."""
    for m in range(1, n):
        if is_zero(phis[m], side_tol):
            return m
    return None


def build_module(
    spec: AlgebraSpec,
    eta: Scalar,
    n: int,
    basis_kind: BasisKind = BasisKind.unnormalized,
) -> ModuleRep:
    """The N-dimensional truncation of the lowest-weight module with weight eta.

    J+ maps the top basis vector to zero; verify_module checks that this
    truncation is consistent (it is when Phi(eta, N) = 0).
    """
    if n < 1:
        raise InvalidParamError("module dimension must be at least 1")
    basis_kind = BasisKind(basis_kind)
    ws = weights(spec, eta, n)
    phis = phi_values(spec, eta, n)
    if len(set(ws)) < n:
        logger.warning("repeated weights in the %d-dimensional module at eta=%s", n, eta)

    plus = [[0] * n for _ in range(n)]
    minus = [[0] * n for _ in range(n)]
    if basis_kind is BasisKind.unnormalized:
        for m in range(1, n):
            plus[m][m - 1] = 1
            minus[m - 1][m] = phis[m]
    else:
        mode = join_modes(spec.mode, mode_of(eta), *(mode_of(p) for p in phis))
        if mode is ScalarMode.complex:
            raise InvalidParamError("the normalized basis needs real scalars")
        failed = side_condition_failure(phis, n, settings.SIDE_TOL)
        if failed is not None:
            raise DegenerateWeightError(f"Phi(eta, {failed}) = 0, so [eta, {failed}]! vanishes")
        for m in range(1, n):
            root = math.sqrt(float(abs(phis[m])))
            plus[m][m - 1] = root
            # sign(Phi) sits on J- as in the normalized action
            minus[m - 1][m] = sign(phis[m]) * root

    return ModuleRep(
        spec=spec,
        eta=eta,
        dim=n,
        basis_kind=basis_kind,
        jplus=Matrix.from_rows(plus),
        jzero=Matrix.diagonal(ws),
        jminus=Matrix.from_rows(minus),
        weights=tuple(ws),
        phis=tuple(phis),
    )


def change_of_basis(rep: ModuleRep) -> Matrix:
    """D with D[m][m] = 1/sqrt([eta, m]!), so J_normalized = D^-1 J_unnormalized D."""
    return Matrix.diagonal([1 / math.sqrt(float(x)) for x in rep.factorials()])


def verify_module(rep: ModuleRep, tol: Optional[float] = None) -> CheckReport:
    """Residuals of the defining relations, Cayley-Hamilton, nilpotency,
    Phi(eta, N) = 0 and the side condition Phi(eta, m) != 0 for 0 < m < N."""
    tol = settings.FLOAT_TOL if tol is None else tol
    spec, n = rep.spec, rep.dim
    jp, j0, jm = rep.jplus, rep.jzero, rep.jminus
    g_j0 = apply_exppoly_to_diagonal(spec.G, j0)
    f_j0 = apply_exppoly_to_diagonal(spec.f, j0)
    identity = Matrix.identity(n)

    report = CheckReport(tol=tol)
    report.add_matrix("jzero_jplus", j0 @ jp - jp @ g_j0, "J0 J+ = J+ G(J0)")
    report.add_matrix("jminus_jzero", jm @ j0 - g_j0 @ jm, "J- J0 = G(J0) J-")
    report.add_matrix(
        "jminus_jplus", jm @ jp - (jp @ jm).scale(spec.s) - f_j0, "J- J+ = s J+ J- + f(J0)"
    )
    product = identity
    for w in rep.weights:
        product = product @ (j0 - identity.scale(w))
    report.add_matrix("cayley_hamilton", product, "prod_m (J0 - G^[m](eta)) = 0")
    report.add_matrix("jplus_nilpotent", jp ** n, "J+^N = 0")
    report.add_matrix("jminus_nilpotent", jm ** n, "J-^N = 0")
    report.add("phi_root", magnitude(rep.phis[n]), "Phi(eta, N) = 0")
    failed = side_condition_failure(rep.phis, n, settings.SIDE_TOL)
    report.add_flag(
        "side_condition",
        failed is None,
        None if failed is None else f"Phi(eta, {failed}) = 0",
    )
    return report


@dataclass
class RootEntry:
    eta: Scalar
    valid: bool
    failed_side_condition_at: Optional[int] = None
    exact: bool = True

    def to_json(self) -> Dict[str, Any]:
        return {
            "eta": format_scalar(self.eta),
            "valid": self.valid,
            "failed_side_condition_at": self.failed_side_condition_at,
            "exact": self.exact,
        }


@dataclass
class DimSearchResult:
    N: int
    roots: List[RootEntry] = field(default_factory=list)
    numeric_roots: List[RootEntry] = field(default_factory=list)
    identically_zero: bool = False
    unsupported_root_class: bool = False
    note: Optional[str] = None

    @property
    def valid_roots(self) -> List[RootEntry]:
        return [r for r in self.roots + self.numeric_roots if r.valid]

    def to_json(self) -> Dict[str, Any]:
        data = {
            "N": self.N,
            "roots": [r.to_json() for r in self.roots],
            "numeric_roots": [r.to_json() for r in self.numeric_roots],
            "identically_zero": self.identically_zero,
            UnsupportedRootClassError.code: self.unsupported_root_class,
        }
        if self.note:
            data["note"] = self.note
        return data


def _classify(spec: AlgebraSpec, eta: Scalar, n: int, cfg: RootSearchConfig, exact: bool) -> RootEntry:
    phis = phi_values(spec, eta, n)
    failed = side_condition_failure(phis, n, 0.0 if exact else cfg.side_tol)
    return RootEntry(eta=eta, valid=failed is None, failed_side_condition_at=failed, exact=exact)


def _residual_bound(phi: ExpPoly, cfg: RootSearchConfig) -> float:
    return cfg.root_tol * max(1.0, float(phi.max_abs_coefficient()))


def _same_root(phi: ExpPoly, a: Scalar, b: Scalar, cfg: RootSearchConfig) -> bool:
    """a and b are one root: close, or a real cluster around a multiple root."""
    if abs(a - b) <= cfg.root_tol * max(1.0, abs(b)):
        return True
    if isinstance(a, complex) or isinstance(b, complex):
        return False
    mid = (float(a) + float(b)) / 2
    return abs(phi.evaluate(mid)) <= _residual_bound(phi, cfg)


def _numeric_candidates(phi: ExpPoly, mode: ScalarMode, cfg: RootSearchConfig) -> List[Scalar]:
    if mode is not ScalarMode.complex and not cfg.want_complex:
        phi = phi.promote(ScalarMode.real)
    bound = _residual_bound(phi, cfg)
    out: List[Scalar] = []
    for r in numeric_poly_roots(phi, cfg.root_tol):
        if mode is ScalarMode.complex or cfg.want_complex:
            candidate: Scalar = r
        elif abs(r.imag) <= cfg.root_tol * max(1.0, abs(r)):
            candidate = r.real
        elif abs(phi.evaluate(r.real)) <= bound:
            # a multiple real root splits into a near-conjugate pair
            candidate = r.real
        else:
            continue
        if not any(_same_root(phi, candidate, c, cfg) for c in out):
            out.append(candidate)
    return out


def _mark_unsupported(result: DimSearchResult, message: str) -> None:
    error = UnsupportedRootClassError(message)
    result.unsupported_root_class = True
    result.note = f"{error.code}: {error}"
    logger.warning("N=%d: %s", result.N, error)


def search_dimension(spec: AlgebraSpec, n: int, cfg: Optional[RootSearchConfig] = None) -> DimSearchResult:
    """Roots of Phi(., n), each marked valid when the side condition holds."""
    cfg = cfg or RootSearchConfig()
    phi = phi_symbolic(spec, n)
    result = DimSearchResult(N=n)
    if phi.is_zero:
        result.identically_zero = True
        result.note = f"Phi(eta, {n}) vanishes identically"
        return result
    mode = spec.mode
    if phi.is_polynomial:
        exact_roots: List[Fraction] = []
        if mode is ScalarMode.exact:
            exact_roots = rational_roots(phi)
            result.roots = [_classify(spec, r, n, cfg, exact=True) for r in exact_roots]
        for r in _numeric_candidates(phi, mode, cfg):
            if any(_same_root(phi, r, e, cfg) for e in exact_roots):
                continue
            result.numeric_roots.append(_classify(spec, r, n, cfg, exact=False))
    elif mode is ScalarMode.complex:
        _mark_unsupported(result, "no root search for complex exponential polynomials")
    else:
        try:
            found = exp_real_roots(phi.promote(ScalarMode.real), cfg)
        except ZeroPolynomialError:
            found = []
        real_spec = spec.promote(ScalarMode.real)
        result.numeric_roots = [_classify(real_spec, r, n, cfg, exact=False) for r in found]
        if not found:
            _mark_unsupported(result, f"no sign change found on {cfg.real_interval}")
    logger.debug(
        "N=%d: %d exact and %d numeric roots", n, len(result.roots), len(result.numeric_roots)
    )
    return result


def find_dimensions(
    spec: AlgebraSpec,
    n_max: int,
    search: Optional[RootSearchConfig] = None,
    jobs: int = 1,
) -> List[DimSearchResult]:
    search = search or RootSearchConfig()
    dims = list(range(1, n_max + 1))
    if jobs > 1 and len(dims) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(search_dimension, [spec] * len(dims), dims, [search] * len(dims)))
    return [search_dimension(spec, n, search) for n in dims]


def multiplicity_report(spec: AlgebraSpec, n: int, search: Optional[RootSearchConfig] = None) -> int:
    """Number of inequivalent N-dimensional lowest-weight modules found."""
    return len(search_dimension(spec, n, search).valid_roots)
