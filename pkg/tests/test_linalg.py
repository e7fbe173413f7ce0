from fractions import Fraction

import pytest

from app.core.errors import DimensionMismatchError, InconsistentSystemError, NotDiagonalError
from app.engine.exppoly import ExpPoly
from app.engine.linalg import (
    Matrix,
    apply_exppoly_to_diagonal,
    commutator,
    s_commutator,
    solve_linear,
)
from app.engine.numeric import ScalarMode

F = Fraction


def test_products():
    a = Matrix.from_rows([[F(1), F(2)], [F(3), F(4)]])
    assert Matrix.identity(2) @ a == a
    assert a @ Matrix.zeros(2) == Matrix.zeros(2)
    raising = Matrix.from_rows([[0, 1], [0, 0]])
    lowering = Matrix.from_rows([[0, 0], [1, 0]])
    assert raising @ lowering == Matrix.from_rows([[1, 0], [0, 0]])
    with pytest.raises(DimensionMismatchError):
        a @ Matrix.zeros(3)


def test_s_commutator():
    a = Matrix.from_rows([[F(1), F(2)], [F(3), F(4)]])
    b = Matrix.from_rows([[F(0), F(1)], [F(5), F(-1)]])
    assert s_commutator(a, a, 1) == Matrix.zeros(2)
    assert s_commutator(a, b, -1) == a @ b + b @ a
    assert commutator(a, b) == -commutator(b, a)
    d1, d2 = Matrix.diagonal([F(1), F(2)]), Matrix.diagonal([F(3), F(5)])
    assert s_commutator(d1, d2, F(1, 3)) == (d1 @ d2).scale(1 - F(1, 3))
    with pytest.raises(DimensionMismatchError):
        s_commutator(a, Matrix.identity(3), 1)


def test_apply_exppoly_to_diagonal():
    z = ExpPoly.identity()
    d = Matrix.diagonal([F(-1), F(0), F(1)])
    assert apply_exppoly_to_diagonal(z, d) == d
    assert apply_exppoly_to_diagonal(z * z - z, d) == Matrix.diagonal([F(2), F(0), F(0)])
    two_z = ExpPoly.exponential(F(2))
    image = apply_exppoly_to_diagonal(two_z, Matrix.diagonal([F(3), F(-1)]))
    assert image == Matrix.diagonal([F(8), F(1, 2)])
    assert image.mode is ScalarMode.exact
    with pytest.raises(NotDiagonalError):
        apply_exppoly_to_diagonal(z, Matrix.from_rows([[0, 1], [0, 0]]))


def test_solve_identity_and_zero_systems():
    sol = solve_linear(Matrix.identity(3), [F(1), F(-2), F(5)])
    assert sol.solution == (1, -2, 5)
    assert sol.kernel_dim == 0

    sol = solve_linear(Matrix.zeros(2), [F(0), F(0)])
    assert sol.solution == (0, 0)
    assert sol.kernel_dim == 2


def test_solve_small_exact_system():
    # a z + b against s rho(z) - rho(z + 1/2) = -z/2 with s = -1
    a = Matrix.from_rows([[F(-1, 2), F(-2)], [F(-2), F(0)]])
    sol = solve_linear(a, [F(0), F(-1, 2)])
    assert sol.solution == (F(1, 4), F(-1, 16))


def test_exact_solution_has_no_residual():
    a = Matrix.from_rows([[F(2), F(1), F(-1)], [F(-3), F(-1), F(2)], [F(-2), F(1), F(2)]])
    b = [F(8), F(-11), F(-3)]
    sol = solve_linear(a, b)
    assert sol.solution == (2, 3, -1)
    residual = a @ Matrix.from_rows([[x] for x in sol.solution]) - Matrix.from_rows([[x] for x in b])
    assert residual.max_abs() == 0


def test_kernel_vectors_are_in_the_kernel():
    a = Matrix.from_rows([[F(1), F(2), F(3)], [F(2), F(4), F(6)]])
    sol = solve_linear(a, [F(1), F(2)])
    assert sol.kernel_dim == 2
    for k in sol.kernel_basis:
        assert (a @ Matrix.from_rows([[x] for x in k])).max_abs() == 0


def test_inconsistent_system():
    a = Matrix.from_rows([[F(1), F(1)], [F(1), F(1)]])
    with pytest.raises(InconsistentSystemError):
        solve_linear(a, [F(1), F(2)])
    with pytest.raises(InconsistentSystemError):
        solve_linear(a.promote(ScalarMode.real), [1.0, 2.0])


def test_float_solve_reports_null_space():
    a = Matrix.from_rows([[1.0, 2.0], [2.0, 4.0]])
    sol = solve_linear(a, [1.0, 2.0])
    assert sol.kernel_dim == 1
    x = sol.solution
    assert x[0] + 2 * x[1] == pytest.approx(1.0)
