import math

import numpy as np
import pytest

from mbint import cgamma, fde_solutions as fde, laplace, polyroots
from mbint.duality import CoefficientMatrix, ode_singular_polynomial
from mbint.errors import (DegreeError, DivergenceError, ParameterError,
                          RepeatedRootError)

BETA_MATRIX = CoefficientMatrix(((0.0, -1.0), (1.0, -1.0)))


def beta_gamma_ratio(x, beta):
    """Oracle: Gamma(x) Gamma(beta) / Gamma(x + beta) via the log kernel."""
    return complex(np.exp(cgamma.log_gamma(x) + cgamma.log_gamma(beta)
                          - cgamma.log_gamma(x + beta)))


def ode_residual(psi, a0, a1, t):
    h = 1e-5
    dpsi = (psi(t + h) - psi(t - h)) / (2 * h)
    u = math.exp(-t)
    return abs(polyroots.polyval(np.asarray(a0, complex), u) * psi(t)
               + polyroots.polyval(np.asarray(a1, complex), u) * dpsi)


def test_solve_beta_closed_form():
    psi = laplace.solve_first_order_ode((0.0, -1.0), (1.0, -1.0))
    assert abs(psi.exponent_lambda) < 1e-14
    assert len(psi.factors) == 1
    z, mu = psi.factors[0]
    assert abs(z - 1.0) < 1e-13 and abs(mu - 1.0) < 1e-13
    for t in (0.3, 1.0, 2.7):
        assert abs(psi(t) - (1.0 - math.exp(-t))) < 1e-12
        assert ode_residual(psi, (0.0, -1.0), (1.0, -1.0), t) < 1e-9


def test_solve_zero_a0_gives_constant():
    psi = laplace.solve_first_order_ode((0.0,), (1.0, -0.5))
    assert psi.exponent_lambda == 0.0 and psi.factors == ()
    assert psi(1.23) == 1.0


def test_solve_two_factor_case():
    a0 = (0.0, 1.0)            # u
    a1 = (1.0, 0.0, -1.0)      # (1 - u)(1 + u)
    psi = laplace.solve_first_order_ode(a0, a1)
    assert len(psi.factors) == 2
    for t in (0.4, 1.5):
        assert ode_residual(psi, a0, a1, t) < 1e-9


def test_solve_repeated_root_rejected():
    with pytest.raises(RepeatedRootError):
        laplace.solve_first_order_ode((0.0, 1.0), (1.0, -2.0, 1.0))


def test_solve_degree_excess_rejected():
    with pytest.raises(DegreeError):
        laplace.solve_first_order_ode((0.0, 0.0, 1.0), (1.0, -1.0))


def test_solve_shared_factor_at_zero_cancels():
    # u * psi + u(1 - u) psi' = 0 reduces to the beta-type equation
    psi = laplace.solve_first_order_ode((0.0, 1.0), (0.0, 1.0, -1.0))
    assert len(psi.factors) == 1


def test_solve_unshared_zero_root_rejected():
    with pytest.raises(DegreeError):
        laplace.solve_first_order_ode((1.0,), (0.0, 1.0))


def test_transform_of_constant():
    psi = laplace.solve_first_order_ode((0.0,), (1.0, -0.5))
    got = laplace.laplace_transform(psi, 2.0, tol=1e-11)
    assert abs(got - 0.5) < 1e-10


@pytest.mark.parametrize("beta,x", [(2.0, 2.5), (3.5, 1.5), (2.0, 1.5),
                                    (3.5, 2.5)])
def test_transform_matches_gamma_ratio_oracle(beta, x):
    psi = laplace.solve_first_order_ode((0.0, -(beta - 1.0)), (1.0, -1.0))
    got = laplace.laplace_transform(psi, x, tol=1e-9)
    oracle = beta_gamma_ratio(x, beta)
    assert abs(got - oracle) / abs(oracle) < 1e-6


def test_transform_endpoint_singularity_substitution():
    # beta = 0.5 gives psi ~ t^(-1/2) at the origin
    beta = 0.5
    psi = laplace.solve_first_order_ode((0.0, -(beta - 1.0)), (1.0, -1.0))
    assert psi.singular_exponent().real == pytest.approx(-0.5, abs=1e-12)
    got = laplace.laplace_transform(psi, 1.5, tol=1e-9)
    oracle = beta_gamma_ratio(1.5, beta)
    assert abs(got - oracle) / abs(oracle) < 1e-6


def test_transform_divergence_guards():
    psi = laplace.solve_first_order_ode((0.0,), (1.0, -0.5))  # lambda = 0
    with pytest.raises(DivergenceError):
        laplace.laplace_transform(psi, 0.0)
    bad = laplace.ClosedFormPsi(0.0, ((1.0 + 0.0j, -1.2 + 0.0j),))
    with pytest.raises(DivergenceError):
        laplace.laplace_transform(bad, 2.0)


def test_fde_numeric_residual_trivial_pair():
    A = CoefficientMatrix(((0.0, 0.0), (1.0, -1.0)))
    assert laplace.fde_numeric_residual(A, lambda x: 1.0 / x, 1.7) < 1e-15


def test_fde_numeric_residual_beta_pipeline():
    psi = laplace.solve_first_order_ode(BETA_MATRIX.row(0),
                                        BETA_MATRIX.row(1))

    def f(x):
        return laplace.laplace_transform(psi, x, tol=1e-9)

    assert laplace.fde_numeric_residual(BETA_MATRIX, f, 1.5) < 1e-6


def test_fde_numeric_residual_gamma_quotient_evaluator():
    inst = fde.FirstOrderFDE.from_matrix(BETA_MATRIX)
    roots = fde.coefficient_roots(inst)
    kernel = fde.gamma_quotient(roots)

    def f(x):
        return fde.solution_value(kernel, x)

    assert laplace.fde_numeric_residual(BETA_MATRIX, f, 2.3) < 1e-11
    assert laplace.fde_numeric_residual(BETA_MATRIX, f, 0.8 + 1.1j) < 1e-11


def test_transform_and_gamma_quotient_agree_up_to_constant():
    # the two solution routes may differ by an x-independent factor only
    psi = laplace.solve_first_order_ode(BETA_MATRIX.row(0),
                                        BETA_MATRIX.row(1))
    inst = fde.FirstOrderFDE.from_matrix(BETA_MATRIX)
    kernel = fde.gamma_quotient(fde.coefficient_roots(inst))
    ratios = []
    for x in (1.5, 2.5, 3.5):
        lhs = laplace.laplace_transform(psi, x, tol=1e-9)
        rhs = fde.solution_value(kernel, x)
        ratios.append(lhs / rhs)
    for r in ratios[1:]:
        assert abs(r / ratios[0] - 1.0) < 1e-6


def test_singular_points_match_ode_polynomial_roots():
    a1 = (1.0, 0.3, -0.8)
    psi = laplace.solve_first_order_ode((0.0, 0.7), a1)
    matrix_rows = ((0.0, 0.7, 0.0), a1)
    A = CoefficientMatrix(matrix_rows)
    sing = sorted(polyroots.roots(ode_singular_polynomial(A)),
                  key=lambda z: z.real)
    mine = sorted((z for z, _ in psi.factors), key=lambda z: z.real)
    assert np.allclose(sing, mine, atol=1e-10)


def test_shift_identity():
    psi = laplace.solve_first_order_ode((0.0, -1.5), (1.0, -1.0))
    x = 2.2
    lhs = laplace.laplace_transform(psi, x + 1.0, tol=1e-10)
    rhs = laplace.laplace_transform(psi.damped(), x, tol=1e-10)
    assert abs(lhs - rhs) / abs(rhs) < 1e-8


def test_a1_identically_zero_rejected():
    with pytest.raises(ParameterError):
        laplace.solve_first_order_ode((1.0,), (0.0,))
