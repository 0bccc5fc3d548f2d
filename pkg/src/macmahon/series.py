"""Closed-form right-hand sides as truncated graded series.

Matrices and vectors here hold polynomials truncated at a common order.
(I - A)^{-1} is the Neumann series, det(I - A)^{-beta} is
exp(beta * sum_t Tr(A^t)/t) with beta kept symbolic, and the derived block
quantities are

    Btilde     = B + U (I-A)^{-1} V
    Bhat       = Btilde - diag B
    thetatilde = theta' + theta (I-A)^{-1} V
    phitilde   = phi'   + U (I-A)^{-1} phi^T
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from . import permanents
from .permanents import BETA, ExtensionVectors, SymbolicMatrix
from .poly import GradedSeries, Polynomial, series_exp, var


@dataclass(frozen=True)
class SeriesMatrix:
    entries: Tuple[Tuple[Polynomial, ...], ...]
    order: int

    def __post_init__(self):
        rows = tuple(tuple(Polynomial.coerce(x).truncate(self.order) for x in row) for row in self.entries)
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("series matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        _check_dims(self.dim, other.dim)
        return SeriesMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                                  for ra, rb in zip(self.entries, other.entries)),
                            min(self.order, other.order))

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        _check_dims(self.dim, other.dim)
        return SeriesMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                                  for ra, rb in zip(self.entries, other.entries)),
                            min(self.order, other.order))

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        _check_dims(self.dim, other.dim)
        order = min(self.order, other.order)
        n = self.dim
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = Polynomial()
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a.mul(b, order)
                row.append(acc)
            rows.append(tuple(row))
        return SeriesMatrix(tuple(rows), order)

    def trace(self) -> Polynomial:
        acc = Polynomial()
        for i in range(self.dim):
            acc = acc + self.entries[i][i]
        return acc

    def to_symbolic(self) -> SymbolicMatrix:
        return SymbolicMatrix(self.entries)

    def is_identity(self) -> bool:
        one = Polynomial.const(1)
        return all(x == (one if i == j else Polynomial())
                   for i, row in enumerate(self.entries) for j, x in enumerate(row))


@dataclass(frozen=True)
class SeriesVector:
    entries: Tuple[Polynomial, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "entries",
                           tuple(Polynomial.coerce(x).truncate(self.order) for x in self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i) -> Polynomial:
        return self.entries[i]


def _check_dims(a: int, b: int):
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def identity(n: int, order: int) -> SeriesMatrix:
    one, zero = Polynomial.const(1), Polynomial()
    return SeriesMatrix(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), order)


def zeros(n: int, order: int) -> SeriesMatrix:
    return SeriesMatrix(tuple(tuple(Polynomial() for _ in range(n)) for _ in range(n)), order)


def variable_matrix(kind: str, rows: int, cols: int):
    return [[var(kind, i + 1, j + 1) for j in range(cols)] for i in range(rows)]


def default_A(n: int, order: int) -> SeriesMatrix:
    return SeriesMatrix(tuple(tuple(row) for row in variable_matrix("A", n, n)), order)


def _require_positive_grade(A: SeriesMatrix):
    for row in A.entries:
        for x in row:
            if x and x.min_grade < 1:
                raise ValueError("matrix entries must have every term of grade >= 1")


def matrix_power_sums(A: SeriesMatrix, order: int) -> list:
    """[A^0, A^1, ..., A^order], each truncated at ``order``."""
    _require_positive_grade(A)
    A = SeriesMatrix(A.entries, order)
    powers = [identity(A.dim, order)]
    for _ in range(order):
        powers.append(powers[-1] @ A)
    return powers


def neumann(A: SeriesMatrix, order: int) -> SeriesMatrix:
    """(I - A)^{-1} = sum_{k=0}^{order} A^k, truncated."""
    total = zeros(A.dim, order)
    for P in matrix_power_sums(A, order):
        total = total + P
    return total


def det_inverse_power(A: SeriesMatrix, order: int, beta=BETA) -> GradedSeries:
    """det(I - A)^{-beta} = exp(beta * sum_{t>=1} Tr(A^t)/t)."""
    powers = matrix_power_sums(A, order)
    log_part = Polynomial()
    for t in range(1, order + 1):
        log_part = log_part + powers[t].trace().scale(Fraction(1, t))
    return series_exp(GradedSeries(log_part.mul(Polynomial.coerce(beta), order), order))


def _row_times(vec: Sequence[Polynomial], M: Sequence[Sequence[Polynomial]], order: int) -> list:
    cols = len(M[0]) if M else 0
    out = []
    for j in range(cols):
        acc = Polynomial()
        for k, x in enumerate(vec):
            if x and M[k][j]:
                acc = acc + x.mul(M[k][j], order)
        out.append(acc)
    return out


def _times_col(M: Sequence[Sequence[Polynomial]], vec: Sequence[Polynomial], order: int) -> list:
    out = []
    for row in M:
        acc = Polynomial()
        for x, y in zip(row, vec):
            if x and y:
                acc = acc + x.mul(y, order)
        out.append(acc)
    return out


def necklace_sum(theta: SeriesVector, A: SeriesMatrix, phi: SeriesVector, order: int) -> GradedSeries:
    """theta (I-A)^{-1} phi^T: the total weight of all open necklaces."""
    if not (len(theta) == len(phi) == A.dim):
        raise ValueError("dimension mismatch between vectors and matrix")
    R = neumann(A, order)
    left = _row_times(theta.entries, R.entries, order)
    acc = Polynomial()
    for x, y in zip(left, phi.entries):
        if x and y:
            acc = acc + x.mul(y, order)
    return GradedSeries(acc, order)


def default_vector(kind: str, n: int, order: int) -> SeriesVector:
    return SeriesVector(tuple(var(kind, i + 1) for i in range(n)), order)


def _U_R(order: int, n_prime: int, n: int):
    R = neumann(default_A(n, order), order)
    U = variable_matrix("U", n_prime, n)
    UR = [_row_times(U[i], R.entries, order) for i in range(n_prime)]
    return R, UR


def btilde(order: int, n_prime: int, n: int) -> SeriesMatrix:
    """B + U (I-A)^{-1} V over the default block variables."""
    _, UR = _U_R(order, n_prime, n)
    B = variable_matrix("B", n_prime, n_prime)
    V = variable_matrix("V", n, n_prime)
    rows = []
    for i in range(n_prime):
        urv = _row_times(UR[i], V, order)
        rows.append(tuple(B[i][j] + urv[j] for j in range(n_prime)))
    return SeriesMatrix(tuple(rows), order)


def bhat(order: int, n_prime: int, n: int) -> SeriesMatrix:
    """Btilde with the diagonal B(i',i') variables removed."""
    bt = btilde(order, n_prime, n)
    rows = tuple(tuple(x - var("B", i + 1, i + 1) if i == j else x for j, x in enumerate(row))
                 for i, row in enumerate(bt.entries))
    return SeriesMatrix(rows, order)


def theta_tilde(order: int, n_prime: int, n: int) -> SeriesVector:
    """theta' + theta (I-A)^{-1} V."""
    R = neumann(default_A(n, order), order)
    theta = [var("theta", j + 1) for j in range(n)]
    tR = _row_times(theta, R.entries, order)
    tRV = _row_times(tR, variable_matrix("V", n, n_prime), order)
    return SeriesVector(tuple(var("thetaP", i + 1) + tRV[i] for i in range(n_prime)), order)


def phi_tilde(order: int, n_prime: int, n: int) -> SeriesVector:
    """phi' + U (I-A)^{-1} phi^T, as the row of entries phitilde_{j'}."""
    _, UR = _U_R(order, n_prime, n)
    phi = [var("phi", j + 1) for j in range(n)]
    URphi = _times_col(UR, phi, order)
    return SeriesVector(tuple(var("phiP", i + 1) + URphi[i] for i in range(n_prime)), order)


def perm_beta_series(M: SeriesMatrix, beta=BETA) -> GradedSeries:
    return GradedSeries(permanents.perm_beta(M.to_symbolic(), beta, order=M.order), M.order)


def pperm_btp_series(M: SeriesMatrix, theta: SeriesVector, phi: SeriesVector, beta=BETA) -> GradedSeries:
    order = min(M.order, theta.order, phi.order)
    v = ExtensionVectors(theta.entries, phi.entries)
    return GradedSeries(permanents.pperm_btp(M.to_symbolic(), v, beta, order=order), order)
