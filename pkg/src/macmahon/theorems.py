"""Verification harness: each identity is checked by computing its left side
by enumeration over multisets and its right side from closed-form series, and
comparing the two exactly up to the requested grade.

Every ``*_sides`` function returns ``(lhs, rhs)`` as polynomials truncated at
the same order; the matching ``verify_*`` wraps it in a report.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Tuple

from . import graphs, series
from .combinat import MultisetIndex, multiset_factorial, multisets_of_size, multisets_up_to
from .permanents import (block_extend, default_matrix, default_vectors, det, dperm_beta,
                         extend_matrix, matrix, perm_beta, pperm_btp)
from .poly import (GradedSeries, Polynomial, fraction_str, monomial_grade, monomial_key,
                   monomial_str, series_exp, var)

THEOREM_IDS = (
    "MMT", "SubMMT", "PPermMMT", "SubPPermMMT", "DerMMT", "SubDerMMT",
    "Remark", "Lemma", "Proposition1", "GraphOracle", "TraceIdentity",
)


class GradingError(AssertionError):
    """A multiset contribution was not homogeneous of grade N."""


@dataclass
class VerificationReport:
    theorem: str
    n: int
    n_prime: Optional[int]
    order: int
    match: bool
    lhs_terms: int
    rhs_terms: int
    first_mismatch: Optional[dict] = None
    elapsed_ms: int = 0
    mode: str = "symbolic"
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "n": self.n,
            "nPrime": self.n_prime,
            "order": self.order,
            "match": self.match,
            "first_mismatch": self.first_mismatch,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "elapsed_ms": self.elapsed_ms,
            "mode": self.mode,
        }
        out.update(self.extra)
        return out

    def text(self) -> str:
        params = f"n={self.n}" + (f" n'={self.n_prime}" if self.n_prime is not None else "") + f" order={self.order}"
        verdict = "MATCH" if self.match else "MISMATCH"
        line = f"{self.theorem:<14} {params:<26} {self.mode:<9} {verdict:<8} lhs={self.lhs_terms} rhs={self.rhs_terms} {self.elapsed_ms}ms"
        if self.first_mismatch:
            fm = self.first_mismatch
            line += f"  first mismatch at {fm['monomial']}: lhs={fm['lhs']} rhs={fm['rhs']}"
        return line


def first_mismatch(lhs: Polynomial, rhs: Polynomial) -> Optional[dict]:
    """The smallest monomial (canonical order) whose coefficients differ."""
    diff = lhs - rhs
    if not diff:
        return None
    m = min(diff.terms, key=monomial_key)
    return {"monomial": monomial_str(m), "lhs": fraction_str(lhs.coefficient(m)),
            "rhs": fraction_str(rhs.coefficient(m))}


def make_report(theorem: str, n: int, n_prime, order: int, lhs: Polynomial, rhs: Polynomial,
                started: float) -> VerificationReport:
    fm = first_mismatch(lhs, rhs)
    return VerificationReport(theorem, n, n_prime, order, fm is None, len(lhs), len(rhs), fm,
                              int(round((time.perf_counter() - started) * 1000)))


def _check_homogeneous(p: Polynomial, N: int, r) -> None:
    for m in p.terms:
        if monomial_grade(m) != N:
            raise GradingError(f"contribution of r={r} has a term of grade {monomial_grade(m)}, expected {N}")


def enumeration_sum(n: int, order: int, term: Callable[[MultisetIndex], Polynomial],
                    sizes=None) -> Polynomial:
    """sum over r with |r| <= order (or |r| in ``sizes``) of term(r) / r!."""
    total = Polynomial()
    rs = multisets_up_to(n, order) if sizes is None else (
        r for N in sizes for r in multisets_of_size(n, N))
    for r in rs:
        contribution = term(r)
        _check_homogeneous(contribution, r.size, r)
        total = total + contribution.scale(Fraction(1, multiset_factorial(r)))
    return total


# -- the six series identities --------------------------------------------

def _det_factor(n: int, order: int) -> GradedSeries:
    return series.det_inverse_power(series.default_A(n, order), order)


def _necklace_factor(n: int, order: int) -> GradedSeries:
    A = series.default_A(n, order)
    theta = series.default_vector("theta", n, order)
    phi = series.default_vector("phi", n, order)
    return series_exp(series.necklace_sum(theta, A, phi, order))


def _trace_factor(n: int, order: int) -> GradedSeries:
    trace = Polynomial()
    for i in range(1, n + 1):
        trace = trace + var("A", i, i)
    return series_exp(GradedSeries(-(trace * var("beta")), order))


def mmt_sides(n: int, order: int) -> Tuple[Polynomial, Polynomial]:
    lhs = enumeration_sum(n, order, lambda r: perm_beta(extend_matrix(n, r)))
    return lhs, _det_factor(n, order).body


def submatrix_mmt_sides(n_prime: int, n: int, order: int):
    lhs = enumeration_sum(n, order, lambda r: perm_beta(block_extend(n_prime, n, r)))
    rhs = series.perm_beta_series(series.btilde(order, n_prime, n)) * _det_factor(n, order)
    return lhs, rhs.body


def pperm_mmt_sides(n: int, order: int):
    def term(r):
        M = extend_matrix(n, r)
        return pperm_btp(M, default_vectors(M))

    lhs = enumeration_sum(n, order, term)
    return lhs, (_necklace_factor(n, order) * _det_factor(n, order)).body


def sub_pperm_mmt_sides(n_prime: int, n: int, order: int):
    def term(r):
        M = block_extend(n_prime, n, r)
        return pperm_btp(M, default_vectors(M))

    lhs = enumeration_sum(n, order, term)
    inner = series.pperm_btp_series(series.btilde(order, n_prime, n),
                                    series.theta_tilde(order, n_prime, n),
                                    series.phi_tilde(order, n_prime, n))
    return lhs, (_necklace_factor(n, order) * inner * _det_factor(n, order)).body


def derangement_mmt_sides(n: int, order: int):
    lhs = enumeration_sum(n, order, lambda r: dperm_beta(extend_matrix(n, r)))
    return lhs, (_trace_factor(n, order) * _det_factor(n, order)).body


def sub_derangement_mmt_sides(n_prime: int, n: int, order: int):
    lhs = enumeration_sum(n, order, lambda r: dperm_beta(block_extend(n_prime, n, r)))
    rhs = _trace_factor(n, order) * series.perm_beta_series(series.bhat(order, n_prime, n)) * _det_factor(n, order)
    return lhs, rhs.body


def verify_mmt(n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("MMT", n, None, order, *mmt_sides(n, order), t0)


def verify_submatrix_mmt(n_prime: int, n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("SubMMT", n, n_prime, order, *submatrix_mmt_sides(n_prime, n, order), t0)


def verify_pperm_mmt(n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("PPermMMT", n, None, order, *pperm_mmt_sides(n, order), t0)


def verify_sub_pperm_mmt(n_prime: int, n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("SubPPermMMT", n, n_prime, order, *sub_pperm_mmt_sides(n_prime, n, order), t0)


def verify_derangement_mmt(n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("DerMMT", n, None, order, *derangement_mmt_sides(n, order), t0)


def verify_sub_derangement_mmt(n_prime: int, n: int, order: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("SubDerMMT", n, n_prime, order, *sub_derangement_mmt_sides(n_prime, n, order), t0)


# -- finite determinant identities -----------------------------------------

def _zero_one_vectors(n: int):
    return (MultisetIndex(r) for r in itertools.product((0, 1), repeat=n))


def remark_sides(n: int):
    B = default_matrix(n, "B")
    lhs = Polynomial()
    for r in _zero_one_vectors(n):
        lhs = lhs + det(extend_matrix(n, r, base=B))
    one = Polynomial.const(1)
    I_plus_B = matrix([[B[i, j] + (one if i == j else 0) for j in range(n)] for i in range(n)])
    return lhs, det(I_plus_B)


def lemma_sides(n_prime: int, n: int):
    lhs = Polynomial()
    for r in _zero_one_vectors(n):
        lhs = lhs + det(block_extend(n_prime, n, r))
    dim = n_prime + n
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            if i < n_prime and j < n_prime:
                row.append(var("B", i + 1, j + 1))
            elif i < n_prime:
                row.append(-var("U", i + 1, j - n_prime + 1))
            elif j < n_prime:
                row.append(-var("V", i - n_prime + 1, j + 1))
            else:
                a = var("A", i - n_prime + 1, j - n_prime + 1)
                row.append(a + 1 if i == j else a)
        rows.append(row)
    return lhs, det(matrix(rows))


def verify_remark_beta_minus1(n: int) -> VerificationReport:
    t0 = time.perf_counter()
    lhs, rhs = remark_sides(n)
    return make_report("Remark", n, None, n, lhs, rhs, t0)


def verify_lemma_beta_minus1(n_prime: int, n: int) -> VerificationReport:
    t0 = time.perf_counter()
    lhs, rhs = lemma_sides(n_prime, n)
    return make_report("Lemma", n, n_prime, n, lhs, rhs, t0)


# -- graph-side identities -------------------------------------------------

def det_I_minus_A(n: int) -> Polynomial:
    A = default_matrix(n)
    one = Polynomial.const(1)
    return det(matrix([[(one if i == j else Polynomial()) - A[i, j] for j in range(n)] for i in range(n)]))


def proposition1_sides(n: int, D: int):
    prod = Polynomial.const(1)
    for _, w in graphs.lyndon_cycles(n, D):
        prod = prod.mul(Polynomial.const(1) - w, D)
    return prod, det_I_minus_A(n).truncate(D)


def verify_proposition1(n: int, D: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("Proposition1", n, None, D, *proposition1_sides(n, D), t0)


_KIND_TERMS = {
    "full": lambda n: lambda r: perm_beta(extend_matrix(n, r)),
    "partial": lambda n: lambda r: (lambda M: pperm_btp(M, default_vectors(M)))(extend_matrix(n, r)),
    "derangement": lambda n: lambda r: dperm_beta(extend_matrix(n, r)),
}


def graph_oracle_sides(n: int, N: int, kind: str = "full"):
    if kind not in _KIND_TERMS:
        raise ValueError(f"unknown graph kind {kind!r}")
    lhs = enumeration_sum(n, N, _KIND_TERMS[kind](n), sizes=[N])
    return lhs, graphs.class_sum(n, N, kind)


def verify_graph_oracle(n: int, N: int, kind: str = "full") -> VerificationReport:
    t0 = time.perf_counter()
    report = make_report("GraphOracle", n, None, N, *graph_oracle_sides(n, N, kind), t0)
    report.extra["kind"] = kind
    return report


def trace_identity_sides(n: int, t: int):
    """sum over t-cycle classes of (primitive period) * weight, against beta Tr(A^t)."""
    lhs = Polynomial()
    for seq in graphs.cycle_types(n, t):
        ck = (graphs.CYCLE, seq)
        lhs = lhs + graphs.component_weight(ck).scale(graphs.primitive_period(seq))
    A = series.default_A(n, t)
    P = series.identity(n, t)
    for _ in range(t):
        P = P @ A
    return lhs, P.trace() * var("beta")


def verify_trace_identity(n: int, t: int) -> VerificationReport:
    t0 = time.perf_counter()
    return make_report("TraceIdentity", n, None, t, *trace_identity_sides(n, t), t0)
