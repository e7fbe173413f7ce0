"""The Casimir function rho, solving s rho(z) - rho(G(z)) = f(z), and the
matrix checks on C = J+ J- + rho(J0)."""
import cmath
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import (
    InconsistentSystemError,
    NoSolutionInAnsatzError,
)
from app.engine.algebra import AlgebraSpec
from app.engine.exppoly import ExpPoly
from app.engine.linalg import (
    LinearSolution,
    Matrix,
    apply_exppoly_to_diagonal,
    s_commutator,
    solve_linear,
)
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    isclose,
    join_modes,
    mode_of,
    power,
    rational_power,
)
from app.engine.reports import CheckReport
from app.engine.repbuild import ModuleRep

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CasimirSolution:
    rho: ExpPoly
    kernel_dim: int
    residual: ExpPoly
    max_degree: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "rho": self.rho.to_json(),
            "kernel_dim": self.kernel_dim,
            "residual": self.residual.to_json(),
            "max_degree": self.max_degree,
        }


def consistency_residual(spec: AlgebraSpec, rho: ExpPoly) -> ExpPoly:
    """s rho(z) - rho(G(z)) - f(z)."""
    return rho.scale(spec.s) - rho.compose(spec.G) - spec.f


def _closed_bases(spec: AlgebraSpec) -> List[Scalar]:
    """Bases of f closed under b -> b**alpha for affine G = alpha z + beta.

    For |alpha| != 1 the orbit is infinite and is cut after
    settings.RHO_BASE_CLOSURE_STEPS rounds.
    """
    bases = list(spec.f.bases)
    G = spec.G
    if not G.is_polynomial or G.degree != 1:
        return bases
    alpha = G.poly_coeffs[1]
    exact = mode_of(alpha) is ScalarMode.exact
    frontier = bases
    for _ in range(settings.RHO_BASE_CLOSURE_STEPS):
        fresh: List[Scalar] = []
        for b in frontier:
            if exact and mode_of(b) is ScalarMode.exact:
                image = rational_power(b, alpha)
                if image is None:
                    continue
            else:
                image = power(b, alpha)
                if not cmath.isfinite(image):
                    continue
            if not any(isclose(image, c, settings.FLOAT_TOL) for c in bases + fresh):
                fresh.append(image)
        if not fresh:
            break
        bases = bases + fresh
        frontier = fresh
    return bases


def _ansatz(spec: AlgebraSpec, max_degree: int) -> List[ExpPoly]:
    return [
        ExpPoly.exponential(b, [0] * j + [1])
        for b in _closed_bases(spec)
        for j in range(max_degree + 1)
    ]


def _orthogonal_to_kernel(
    x: Sequence[Scalar], kernel: Sequence[Sequence[Scalar]], mode: ScalarMode
) -> List[Scalar]:
    """Remove from x its component along span(kernel) (coefficient inner product)."""
    if not kernel:
        return list(x)
    k = len(kernel)

    def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        if mode is ScalarMode.complex:
            return sum((complex(a).conjugate() * b for a, b in zip(u, v)), 0j)
        return sum((a * b for a, b in zip(u, v)), Fraction(0))

    gram = Matrix.from_rows([[dot(kernel[i], kernel[j]) for j in range(k)] for i in range(k)])
    rhs = [dot(kernel[i], x) for i in range(k)]
    coeffs = solve_linear(gram, rhs).solution
    return [xi - sum((coeffs[i] * kernel[i][n] for i in range(k)), 0) for n, xi in enumerate(x)]


def _solve_at_degree(spec: AlgebraSpec, max_degree: int) -> Optional[CasimirSolution]:
    basis = _ansatz(spec, max_degree)
    if not basis:
        # f = 0: rho = 0 is a particular solution
        zero = ExpPoly.zero()
        return CasimirSolution(zero, 0, consistency_residual(spec, zero), max_degree)
    images = [b.scale(spec.s) - b.compose(spec.G) for b in basis]
    keys: List[Tuple[Scalar, int]] = []
    for poly in images + [spec.f]:
        for key in poly.coefficients():
            if key not in keys:
                keys.append(key)
    columns = [img.coefficients() for img in images]
    target = spec.f.coefficients()
    a = Matrix.from_rows([[col.get(key, 0) for col in columns] for key in keys])
    b = [target.get(key, 0) for key in keys]
    try:
        sol: LinearSolution = solve_linear(a, b)
    except InconsistentSystemError:
        return None
    mode = join_modes(a.mode, spec.mode)
    x = _orthogonal_to_kernel(sol.solution, sol.kernel_basis, mode)
    rho = sum((bf.scale(c) for bf, c in zip(basis, x)), ExpPoly.zero())
    if mode is not ScalarMode.exact:
        rho = rho.promote(mode)
    residual = consistency_residual(spec, rho)
    if not residual.isclose(ExpPoly.zero()):
        return None
    return CasimirSolution(rho, sol.kernel_dim, residual, max_degree)


def solve_rho(spec: AlgebraSpec, max_degree: Optional[int] = None) -> CasimirSolution:
    """Exponential-polynomial solution of s rho(z) - rho(G(z)) = f(z).

    The ansatz spans z^j b^z for j <= max_degree and every base b of f, closed
    under the base map of an affine G. With
    no explicit degree the search starts at deg(f) + 1 and retries up to
    settings.RHO_EXTRA_DEGREES more. The returned rho has no component along
    the kernel of rho -> s rho - rho o G.
    """
    if max_degree is not None:
        degrees = [max_degree]
    else:
        start = max(spec.f.degree, 0) + 1
        degrees = list(range(start, start + settings.RHO_EXTRA_DEGREES + 1))
    for degree in degrees:
        solution = _solve_at_degree(spec, degree)
        if solution is not None:
            return solution
        logger.info("no rho with degree <= %d for %s, retrying", degree, spec.name)
    raise NoSolutionInAnsatzError(
        f"no exponential-polynomial rho up to degree {degrees[-1]} for {spec.name}"
    )


def casimir_eigenvalue(spec: AlgebraSpec, rho: ExpPoly, eta: Scalar, m: int) -> Scalar:
    """s^m rho(eta), the eigenvalue of C on the m-th basis vector."""
    return spec.s ** m * rho.evaluate(eta)


def casimir_matrix(rep: ModuleRep, rho: ExpPoly) -> Matrix:
    """C = J+ J- + rho(J0)."""
    return rep.jplus @ rep.jminus + apply_exppoly_to_diagonal(rho, rep.jzero)


def _eigenvalue_residual(c: Matrix, expected: Sequence[Scalar]) -> Scalar:
    diag = Matrix.diagonal(list(expected))
    return (c - diag).max_abs()


def check_casimir_matrix(
    rep: ModuleRep, rho: ExpPoly, tol: Optional[float] = None
) -> CheckReport:
    """C commutes with J0 and s-commutes with J+-; for s = -1, C^2 is central."""
    tol = settings.FLOAT_TOL if tol is None else tol
    s = rep.spec.s
    c = casimir_matrix(rep, rho)
    report = CheckReport(tol=tol)
    report.add_matrix("casimir_jzero", s_commutator(c, rep.jzero, 1), "[C, J0] = 0")
    report.add_matrix("jminus_casimir", s_commutator(rep.jminus, c, s), "[J-, C]_s = 0")
    report.add_matrix("casimir_jplus", s_commutator(c, rep.jplus, s), "[C, J+]_s = 0")
    expected = [casimir_eigenvalue(rep.spec, rho, rep.eta, m) for m in range(rep.dim)]
    report.add("casimir_eigenvalues", _eigenvalue_residual(c, expected), "mu(C) = diag(s^m rho(eta))")
    if s == -1:
        c2 = c @ c
        report.add_matrix("casimir2_jzero", s_commutator(c2, rep.jzero, 1), "[C^2, J0] = 0")
        report.add_matrix("jminus_casimir2", s_commutator(rep.jminus, c2, 1), "[J-, C^2] = 0")
        report.add_matrix("casimir2_jplus", s_commutator(c2, rep.jplus, 1), "[C^2, J+] = 0")
    return report


def root_of_unity(k: int) -> Scalar:
    """exp(2 pi i / k), exact for k = 1, 2."""
    if k == 1:
        return Fraction(1)
    if k == 2:
        return Fraction(-1)
    return cmath.exp(2j * cmath.pi / k)


def check_root_of_unity_casimir(
    rep: ModuleRep, rho: ExpPoly, k: int, tol: Optional[float] = None
) -> CheckReport:
    """D = C^k is central when s = exp(2 pi i / k), with eigenvalue rho(eta)^k."""
    tol = settings.ROOT_OF_UNITY_TOL if tol is None else tol
    if k < 1:
        raise ValueError("k must be a positive integer")
    s = rep.spec.s
    report = CheckReport(tol=tol)
    report.add("s_root_of_unity", abs(s ** k - 1), "s^k = 1")
    d = casimir_matrix(rep, rho) ** k
    report.add_matrix("d_jzero", s_commutator(d, rep.jzero, 1), "[D, J0] = 0")
    report.add_matrix("d_jplus", s_commutator(d, rep.jplus, 1), "[D, J+] = 0")
    report.add_matrix("d_jminus", s_commutator(d, rep.jminus, 1), "[D, J-] = 0")
    value = rho.evaluate(rep.eta) ** k
    report.add("d_eigenvalues", _eigenvalue_residual(d, [value] * rep.dim), "mu(D) = rho(eta)^k")
    return report

