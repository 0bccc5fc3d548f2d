"""Generating polynomials for graphs on r identically labelled vertices.

p_r(alpha, beta) counts partial permutation graphs by (open necklaces, cycles)
and d_r(beta) counts derangements by cycles.  Both come from the 1x1 case
A = z of the permanent variants; the exponential generating functions are
checked against independently built series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .combinat import MultisetIndex
from .permanents import ExtensionVectors, dperm_beta, extend_matrix, matrix, pperm_btp
from .poly import (GradedSeries, Monomial, Polynomial, make_variable, series_exp, var,
                   var_id)

Z = make_variable("z")
ALPHA = make_variable("alpha")
BETA_VAR = make_variable("beta")
THETA1 = make_variable("theta", 1)
PHI1 = make_variable("phi", 1)


@dataclass(frozen=True)
class SequenceTable:
    kind: str  # "p" or "d"
    rows: Tuple[Tuple[int, Polynomial], ...]

    def coefficient_matrix(self, r: int) -> Dict[Tuple[int, int], int]:
        """{(s, t): count} for p (s = alpha degree), {(0, s): count} for d."""
        out = {}
        for m, c in self.rows[r][1].terms.items():
            degs = {v: e for v, e in _vars(m)}
            out[(degs.get(ALPHA, 0), degs.get(BETA_VAR, 0))] = int(c)
        return dict(sorted(out.items()))

    def value_at(self, r: int, **values) -> Fraction:
        mapping = {ALPHA: values.get("alpha", 1), BETA_VAR: values.get("beta", 1)}
        return self.rows[r][1].subs(mapping).constant_term()

    def to_json(self) -> dict:
        rows = []
        for r, p in self.rows:
            rows.append({
                "r": r,
                "polynomial": str(p),
                "coefficients": [[s, t, c] for (s, t), c in self.coefficient_matrix(r).items()],
                "value_at_1": int(self.value_at(r)),
            })
        return {"kind": self.kind, "rows": rows}

    def text(self) -> str:
        lines = [f"{'r':>3}  {'value(1)':>10}  polynomial"]
        for r, p in self.rows:
            lines.append(f"{r:>3}  {int(self.value_at(r)):>10}  {p}")
        return "\n".join(lines)


def _vars(m: Monomial):
    from .poly import monomial_variables
    return monomial_variables(m)


def strip_z(p: Polynomial, r: int) -> Polynomial:
    """Divide by z^r, insisting every term carries exactly z^r."""
    zid = var_id(Z)
    out = {}
    for m, c in p.terms.items():
        rest = tuple((k, e) for k, e in m if k != zid)
        zdeg = dict(m).get(zid, 0)
        if zdeg != r:
            raise ValueError(f"term has z^{zdeg}, expected z^{r}")
        out[rest] = c
    return Polynomial(out)


def pair_theta_phi(p: Polynomial) -> Polynomial:
    """Apply theta_1 = phi_1 = sqrt(alpha z) without square roots: a term
    theta^s phi^s becomes (alpha z)^s."""
    tid, pid = var_id(THETA1), var_id(PHI1)
    az = var("alpha") * var("z")
    out = Polynomial()
    for m, c in p.terms.items():
        d = dict(m)
        s, s2 = d.pop(tid, 0), d.pop(pid, 0)
        if s != s2:
            raise ValueError("theta and phi degrees differ; the pairing substitution is undefined")
        out = out + Polynomial({tuple(sorted(d.items())): c}) * az ** s
    return out


def _z_matrix():
    return matrix([[var("z")]])


def p_polynomial(r: int) -> Polynomial:
    M = extend_matrix(1, MultisetIndex((r,)), base=_z_matrix())
    v = ExtensionVectors(tuple(var("theta", 1) for _ in range(r)), tuple(var("phi", 1) for _ in range(r)))
    return strip_z(pair_theta_phi(pperm_btp(M, v)), r)


def d_polynomial(r: int) -> Polynomial:
    M = extend_matrix(1, MultisetIndex((r,)), base=_z_matrix())
    return strip_z(dperm_beta(M), r)


def p_sequence(r_max: int) -> SequenceTable:
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    return SequenceTable("p", tuple((r, p_polynomial(r)) for r in range(r_max + 1)))


def d_sequence(r_max: int) -> SequenceTable:
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    return SequenceTable("d", tuple((r, d_polynomial(r)) for r in range(r_max + 1)))


# -- EGF side ------------------------------------------------------------

def rising_factorial(k: int) -> Polynomial:
    """beta (beta+1) ... (beta+k-1)."""
    out = Polynomial.const(1)
    b = var("beta")
    for j in range(k):
        out = out * (b + j)
    return out


def binomial_series(order: int) -> GradedSeries:
    """(1 - z)^{-beta} = sum_k beta^(rising k) z^k / k!."""
    z = var("z")
    total = Polynomial()
    for k in range(order + 1):
        total = total + rising_factorial(k).scale(Fraction(1, math.factorial(k))) * z ** k
    return GradedSeries(total, order)


def p_egf(order: int) -> GradedSeries:
    """exp(alpha z / (1 - z)) / (1 - z)^beta."""
    az = var("alpha") * var("z")
    geometric = sum((var("z") ** k for k in range(order + 1)), Polynomial())
    necklaces = GradedSeries(az * geometric, order)
    return series_exp(necklaces) * binomial_series(order)


def d_egf(order: int) -> GradedSeries:
    """(e^{-z} / (1 - z))^beta = exp(-beta z) (1 - z)^{-beta}."""
    return series_exp(GradedSeries(-(var("beta") * var("z")), order)) * binomial_series(order)


def egf_rows(egf: GradedSeries, r_max: int) -> List[Polynomial]:
    """r! times the z^r coefficient, for r = 0..r_max."""
    return [strip_z(egf.homogeneous(r), r).scale(math.factorial(r)) for r in range(r_max + 1)]
