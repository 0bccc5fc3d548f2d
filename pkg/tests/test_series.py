from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from macmahon import series
from macmahon.permanents import matrix, perm_beta, pperm_btp, ExtensionVectors
from macmahon.poly import Polynomial, const, series_log, var
from macmahon.series import (SeriesMatrix, SeriesVector, bhat, btilde, default_A, default_vector,
                             det_inverse_power, identity, necklace_sum, neumann, phi_tilde,
                             theta_tilde, zeros)
from macmahon.theorems import det_I_minus_A

z, beta = var("z"), var("beta")
A = lambda i, j: var("A", i, j)  # noqa: E731
B = lambda i, j: var("B", i, j)  # noqa: E731
U = lambda i, j: var("U", i, j)  # noqa: E731
V = lambda i, j: var("V", i, j)  # noqa: E731


def zmat(order):
    return SeriesMatrix(((z,),), order)


def test_neumann_of_zero_is_identity():
    assert neumann(zeros(2, 3), 3).is_identity()


def test_neumann_geometric():
    assert neumann(zmat(3), 3)[0, 0] == const(1) + z + z ** 2 + z ** 3


def test_neumann_rejects_grade_zero_entries():
    with pytest.raises(ValueError):
        neumann(SeriesMatrix(((beta,),), 2), 2)


sparse_entries = st.lists(
    st.tuples(st.integers(0, 1), st.integers(0, 1),
              st.sampled_from([A(1, 1), A(1, 2), z, A(2, 1) * beta, z * z])),
    max_size=4)


@given(sparse_entries)
def test_neumann_multiply_back(cells):
    order = 4
    rows = [[Polynomial(), Polynomial()], [Polynomial(), Polynomial()]]
    for i, j, p in cells:
        rows[i][j] = rows[i][j] + p
    M = SeriesMatrix(tuple(map(tuple, rows)), order)
    I = identity(2, order)
    assert ((I - M) @ neumann(M, order)).is_identity()
    assert (neumann(M, order) @ (I - M)).is_identity()


def test_det_inverse_power_trivial_and_binomial():
    assert det_inverse_power(zeros(2, 3), 3).body == const(1)
    got = det_inverse_power(zmat(2), 2).body
    assert got == const(1) + beta * z + (beta * (beta + 1)).scale(Fraction(1, 2)) * z ** 2


@pytest.mark.parametrize("order", [2, 3, 4])
def test_det_inverse_power_at_minus_one_is_det(order):
    got = det_inverse_power(default_A(2, order), order, beta=-1).body
    assert got == det_I_minus_A(2).truncate(order)
    if order >= 2:
        assert got == (const(1) - A(1, 1) - A(2, 2) + A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1))


@pytest.mark.parametrize("order", [3, 5])
def test_det_inverse_power_group_law(order):
    Am = default_A(2, order)
    a, b = var("alpha"), var("beta")
    pa = det_inverse_power(Am, order, beta=a)
    pb = det_inverse_power(Am, order, beta=b)
    assert pa * pb == det_inverse_power(Am, order, beta=a + b)


def test_log_det_is_trace_sum():
    order = 4
    Am = default_A(2, order)
    lg = series_log(det_inverse_power(Am, order, beta=1)).body
    P, expected = identity(2, order), Polynomial()
    for t in range(1, order + 1):
        P = P @ Am
        expected = expected + P.trace().scale(Fraction(1, t))
    assert lg == expected


def test_necklace_sum_examples():
    th, ph = default_vector("theta", 2, 1), default_vector("phi", 2, 1)
    t1, t2, p1, p2 = var("theta", 1), var("theta", 2), var("phi", 1), var("phi", 2)
    assert necklace_sum(th, zeros(2, 1), ph, 1).body == t1 * p1 + t2 * p2
    assert necklace_sum(th, default_A(2, 1), ph, 1).body == t1 * p1 + t2 * p2
    with pytest.raises(ValueError):
        necklace_sum(default_vector("theta", 1, 1), default_A(2, 1), ph, 1)


def test_necklace_sum_single_label():
    # theta = phi = sqrt(alpha z) enters only as theta*phi -> alpha z
    order = 5
    one = SeriesVector((const(1),), order)
    az = var("alpha") * z
    got = necklace_sum(SeriesVector((az,), order), zmat(order), one, order).body
    assert got == az * sum((z ** k for k in range(order)), Polynomial())


def test_btilde_low_orders():
    assert btilde(0, 2, 2).entries == ((B(1, 1), B(1, 2)), (B(2, 1), B(2, 2)))
    uv = lambda i, j, n: sum((U(i, k) * V(k, j) for k in range(1, n + 1)), Polynomial())  # noqa: E731
    assert btilde(1, 2, 2)[0, 1] == B(1, 2) + uv(1, 2, 2)
    uav = sum((U(1, k) * A(k, l) * V(l, 2) for k in (1, 2) for l in (1, 2)), Polynomial())
    assert btilde(2, 2, 2)[0, 1] == B(1, 2) + uv(1, 2, 2) + uav


def test_bhat_diagonal():
    assert bhat(0, 2, 1)[0, 0].is_zero()
    assert bhat(0, 2, 1)[0, 1] == B(1, 2)
    assert bhat(1, 1, 2)[0, 0] == U(1, 1) * V(1, 1) + U(1, 2) * V(2, 1)


def test_theta_phi_tilde():
    assert theta_tilde(0, 1, 2).entries == (var("thetaP", 1),)
    assert phi_tilde(0, 1, 2).entries == (var("phiP", 1),)
    th = theta_tilde(1, 1, 2)[0]
    assert th == var("thetaP", 1) + var("theta", 1) * V(1, 1) + var("theta", 2) * V(2, 1)
    ph = phi_tilde(2, 1, 2)[0]
    expected = var("phiP", 1)
    for k in (1, 2):
        expected = expected + U(1, k) * var("phi", k)
        for l in (1, 2):
            expected = expected + U(1, k) * A(k, l) * var("phi", l)
    assert ph == expected


def test_perm_beta_series_small():
    order = 2
    s = z + z ** 2
    assert series.perm_beta_series(SeriesMatrix(((s,),), order)).body == beta * s
    M = SeriesMatrix(((z, z), (A(1, 2), z)), 2)
    assert series.perm_beta_series(M).body == beta ** 2 * z ** 2 + beta * A(1, 2) * z
    const_m = [[B(1, 1), B(1, 2)], [B(2, 1), B(2, 2)]]
    assert series.perm_beta_series(SeriesMatrix(tuple(map(tuple, const_m)), 3)).body == perm_beta(matrix(const_m))


def test_pperm_btp_series_small():
    assert series.pperm_btp_series(SeriesMatrix((), 2), SeriesVector((), 2), SeriesVector((), 2)).body == const(1)
    order = 2
    bt = btilde(order, 1, 1)
    th, ph = theta_tilde(order, 1, 1), phi_tilde(order, 1, 1)
    got = series.pperm_btp_series(bt, th, ph).body
    assert got == (th[0] * ph[0] + beta * bt[0, 0]).truncate(order)
    cm = [[B(1, 1)]]
    v = ExtensionVectors((var("thetaP", 1),), (var("phiP", 1),))
    assert series.pperm_btp_series(SeriesMatrix(((B(1, 1),),), 4), SeriesVector(v.theta, 4),
                                   SeriesVector(v.phi, 4)).body == pperm_btp(matrix(cm), v)
