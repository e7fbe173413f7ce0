from fractions import Fraction

import pytest

from app.core.config import settings
from app.core.errors import NoSolutionInAnsatzError
from app.engine.algebra import AlgebraSpec
from app.engine.casimir import (
    _closed_bases,
    casimir_eigenvalue,
    casimir_matrix,
    check_casimir_matrix,
    check_root_of_unity_casimir,
    consistency_residual,
    solve_rho,
)
from app.engine.exppoly import ExpPoly
from app.engine.linalg import Matrix
from app.engine.numeric import ScalarMode
from app.engine.repbuild import build_module, search_dimension

Z = ExpPoly.identity()
F = Fraction


def test_solve_rho_su2(su2):
    solution = solve_rho(su2)
    assert solution.rho == ExpPoly.polynomial([0, -1, 1])
    assert solution.kernel_dim == 1
    assert solution.residual.is_zero


def test_solve_rho_osp(osp):
    solution = solve_rho(osp)
    assert solution.rho == ExpPoly.polynomial([F(-1, 16), F(1, 4)])
    assert solution.kernel_dim == 0


def test_solve_rho_homogeneous(su2):
    spec = AlgebraSpec("free", F(1), Z + 1, ExpPoly.zero())
    assert solve_rho(spec).rho.is_zero


def test_solve_rho_is_deterministic(a21):
    assert solve_rho(a21).rho == solve_rho(a21).rho
    assert consistency_residual(a21, solve_rho(a21).rho).is_zero


def test_solve_rho_exponential_f():
    from app.engine.catalog import get_preset

    spec = get_preset("uq_su2", {"q": "2"})
    solution = solve_rho(spec)
    assert consistency_residual(spec, solution.rho).is_zero
    assert set(solution.rho.bases) <= {F(1, 4), F(4)}


def test_no_solution_in_ansatz():
    # s=1 with G=z+1 needs degree deg(f)+1; forcing degree 0 leaves no solution
    spec = AlgebraSpec("su2", F(1), Z + 1, Z.scale(-2))
    with pytest.raises(NoSolutionInAnsatzError):
        solve_rho(spec, max_degree=0)


def test_casimir_eigenvalues(su2, osp):
    rho_su2 = solve_rho(su2).rho
    for m in range(3):
        assert casimir_eigenvalue(su2, rho_su2, F(-1), m) == 2
    rho_osp = solve_rho(osp).rho
    assert casimir_eigenvalue(osp, rho_osp, F(-1, 2), 1) == F(3, 16)
    assert casimir_eigenvalue(osp, rho_osp, F(-1, 2), 0) == rho_osp.evaluate(F(-1, 2))


def test_casimir_is_scalar_on_spin_one(su2):
    rep = build_module(su2, F(-1), 3)
    rho = solve_rho(su2).rho
    assert casimir_matrix(rep, rho) == Matrix.identity(3).scale(2)
    report = check_casimir_matrix(rep, rho)
    assert report.ok
    assert all(check.residual == 0 for check in report.checks)


def test_osp_casimir_anticommutes(osp):
    rep = build_module(osp, F(-1, 2), 3)
    rho = solve_rho(osp).rho
    c = casimir_matrix(rep, rho)
    assert c == Matrix.diagonal([F(-3, 16), F(3, 16), F(-3, 16)])
    report = check_casimir_matrix(rep, rho)
    assert report.ok
    names = [check.name for check in report.checks]
    assert "casimir2_jplus" in names and "jminus_casimir2" in names


def test_one_dimensional_module_is_trivial(su2):
    rep = build_module(su2, F(0), 1)
    assert check_casimir_matrix(rep, solve_rho(su2).rho).ok


def test_root_of_unity_k1_and_k2(su2, osp):
    rep = build_module(su2, F(-1), 3)
    assert check_root_of_unity_casimir(rep, solve_rho(su2).rho, 1).ok
    rep = build_module(osp, F(-1, 2), 3)
    report = check_root_of_unity_casimir(rep, solve_rho(osp).rho, 2)
    assert report.ok
    assert report["d_eigenvalues"].residual == 0


def test_root_of_unity_k4():
    """s = i, G = z + 1, f = -2z on the two-dimensional module."""
    spec = AlgebraSpec("s_i", 1j, (Z + 1).promote(ScalarMode.complex), Z.scale(-2).promote(ScalarMode.complex))
    found = search_dimension(spec, 2).valid_roots
    assert len(found) == 1
    eta = found[0].eta
    assert eta == pytest.approx(-1 / (1 + 1j), abs=1e-10)
    rep = build_module(spec, eta, 2)
    rho = solve_rho(spec).rho
    assert rho.evaluate(0.0) == pytest.approx(-1j)
    report = check_root_of_unity_casimir(rep, rho, 4)
    assert report.ok
    for check in report.checks:
        assert abs(check.residual) < 1e-8
    assert check_casimir_matrix(rep, rho).ok


def test_root_of_unity_detects_wrong_s(osp):
    rep = build_module(osp, F(-1, 2), 3)
    report = check_root_of_unity_casimir(rep, solve_rho(osp).rho, 3)
    assert not report["s_root_of_unity"].passed
    assert not report.ok


def test_solve_rho_reflected_bases():
    """G = 1 - z sends 2^z to 2 (1/2)^z, so rho needs both bases."""
    spec = AlgebraSpec("reflect", F(2), ExpPoly.polynomial([1, -1]), ExpPoly.exponential(F(2)))
    solution = solve_rho(spec)
    expected = ExpPoly.exponential(F(2), [F(2, 3)]) + ExpPoly.exponential(F(1, 2), [F(2, 3)])
    assert solution.rho == expected
    assert solution.kernel_dim == 0
    assert solution.residual.is_zero


def test_scaled_bases_are_cut(monkeypatch):
    # G = 2z: 2^z -> 4^z -> 16^z -> ... never closes
    spec = AlgebraSpec("scaled", F(3), Z.scale(2), ExpPoly.exponential(F(2)))
    monkeypatch.setattr(settings, "RHO_BASE_CLOSURE_STEPS", 2)
    assert _closed_bases(spec) == [F(2), F(4), F(16)]
    with pytest.raises(NoSolutionInAnsatzError):
        solve_rho(spec)
