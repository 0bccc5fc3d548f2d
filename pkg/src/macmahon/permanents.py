"""Symbolic matrices indexed by multisets, and the permanent variants.

All four sums (beta-extended permanent, partial permanent, its
(beta, theta, phi)-extension and the deranged permanent) run over the
positions of the matrix, never over labels; the ``1/r!`` normalisation belongs
to the caller.  The empty matrix has every variant equal to 1.

Enumeration is grouped by the multiset of matrix cells a term uses, so equal
entries (repeated labels) are multiplied out once per distinct product.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import combinat
from .combinat import UNDEFINED, MultisetIndex, as_multiset
from .poly import Polynomial, parse_polynomial, var

BETA = var("beta")


@dataclass(frozen=True)
class Labeling:
    """Row/column labels: ``n_prime`` distinct primed indices followed by the
    positions of the multiset ``r`` (plain matrices use r = (1,...,1))."""

    n_prime: int
    r: MultisetIndex
    plain: bool = False

    @property
    def dim(self) -> int:
        return self.n_prime + self.r.size

    def row_names(self) -> List[str]:
        if self.plain:
            return [str(i + 1) for i in range(self.r.n)]
        return [f"{i + 1}'" for i in range(self.n_prime)] + list(self.r.position_names())

    def row_label(self, x: int) -> Tuple[bool, int]:
        """(is_primed, 1-based label) of row ``x``."""
        if x < self.n_prime:
            return True, x + 1
        return False, self.r.labels[x - self.n_prime]


def plain_labeling(n: int) -> Labeling:
    return Labeling(0, MultisetIndex((1,) * n), plain=True)


@dataclass(frozen=True)
class SymbolicMatrix:
    entries: Tuple[Tuple[Polynomial, ...], ...]
    labeling: Optional[Labeling] = None

    def __post_init__(self):
        rows = tuple(tuple(Polynomial.coerce(x) for x in row) for row in self.entries)
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", rows)
        if self.labeling is None:
            object.__setattr__(self, "labeling", plain_labeling(len(rows)))
        elif self.labeling.dim != len(rows):
            raise ValueError("labeling does not match matrix dimension")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def map(self, fn) -> "SymbolicMatrix":
        return SymbolicMatrix(tuple(tuple(fn(x) for x in row) for row in self.entries), self.labeling)

    def subs(self, mapping) -> "SymbolicMatrix":
        return self.map(lambda p: p.subs(mapping))

    def permuted(self, perm: Sequence[int]) -> "SymbolicMatrix":
        """Simultaneous row/column permutation: new[i][j] = old[perm[i]][perm[j]]."""
        e = self.entries
        return SymbolicMatrix(tuple(tuple(e[a][b] for b in perm) for a in perm), self.labeling)

    def with_zero_diagonal(self) -> "SymbolicMatrix":
        z = Polynomial()
        return SymbolicMatrix(
            tuple(tuple(z if i == j else x for j, x in enumerate(row)) for i, row in enumerate(self.entries)),
            self.labeling,
        )

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, row)) + "]" for row in self.entries) + "]"


@dataclass(frozen=True)
class ExtensionVectors:
    theta: Tuple[Polynomial, ...]
    phi: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(Polynomial.coerce(x) for x in self.theta))
        object.__setattr__(self, "phi", tuple(Polynomial.coerce(x) for x in self.phi))
        if len(self.theta) != len(self.phi):
            raise ValueError("theta and phi must have equal length")

    def subs(self, mapping) -> "ExtensionVectors":
        return ExtensionVectors(tuple(p.subs(mapping) for p in self.theta),
                                tuple(p.subs(mapping) for p in self.phi))


def matrix(rows) -> SymbolicMatrix:
    return SymbolicMatrix(tuple(tuple(Polynomial.coerce(x) for x in row) for row in rows))


def default_matrix(n: int, kind: str = "A") -> SymbolicMatrix:
    return matrix([[var(kind, i + 1, j + 1) for j in range(n)] for i in range(n)])


def extend_matrix(n: int, r, base: SymbolicMatrix | None = None) -> SymbolicMatrix:
    """The N x N matrix indexed by the multiset positions; every copy of
    label i against every copy of label j holds the same entry A(i,j)."""
    r = as_multiset(r)
    if r.n != n:
        raise ValueError(f"multiset {r} does not have length n={n}")
    base = base or default_matrix(n)
    labels = r.labels
    rows = tuple(tuple(base[i - 1, j - 1] for j in labels) for i in labels)
    return SymbolicMatrix(rows, Labeling(0, r))


def block_extend(n_prime: int, n: int, r, blocks: dict | None = None) -> SymbolicMatrix:
    """The (n'+N) square matrix [[B, U(r)], [V(r), A(r,r)]]."""
    r = as_multiset(r)
    if r.n != n:
        raise ValueError(f"multiset {r} does not have length n={n}")
    blocks = blocks or {}

    def entry(kind, i, j):
        m = blocks.get(kind)
        return m[i - 1][j - 1] if m is not None else var(kind, i, j)

    lab = Labeling(n_prime, r)
    dim = lab.dim
    rows = []
    for x in range(dim):
        px, lx = lab.row_label(x)
        row = []
        for y in range(dim):
            py, ly = lab.row_label(y)
            kind = {(True, True): "B", (True, False): "U", (False, True): "V", (False, False): "A"}[(px, py)]
            row.append(entry(kind, lx, ly))
        rows.append(tuple(row))
    return SymbolicMatrix(tuple(rows), lab)


def default_vectors(M: SymbolicMatrix) -> ExtensionVectors:
    """theta'(i'), phi'(i') on primed rows, theta(label), phi(label) on the rest."""
    theta, phi = [], []
    for x in range(M.dim):
        primed, lab = M.labeling.row_label(x)
        theta.append(var("thetaP" if primed else "theta", lab))
        phi.append(var("phiP" if primed else "phi", lab))
    return ExtensionVectors(tuple(theta), tuple(phi))


# -- evaluation ------------------------------------------------------------

class _Pool:
    """Interns polynomials so that products can be keyed by sorted id tuples."""

    def __init__(self):
        self.ids: Dict[Polynomial, int] = {}
        self.polys: List[Polynomial] = []

    def add(self, p: Polynomial) -> int:
        k = self.ids.get(p)
        if k is None:
            k = len(self.polys)
            self.ids[p] = k
            self.polys.append(p)
        return k


def _cell_ids(M: SymbolicMatrix, pool: _Pool) -> List[List[int]]:
    """Pool ids per cell, with -1 for zero entries."""
    return [[pool.add(x) if x else -1 for x in row] for row in M.entries]


def _collect(counts: Counter, pool: _Pool, beta: Polynomial, order: int | None) -> Polynomial:
    """sum over keys (C, ids) of count * beta^C * prod(pool[ids])."""
    beta_pows: Dict[int, Polynomial] = {}
    out: Dict = {}
    for (c, ids), n in counts.items():
        if c not in beta_pows:
            beta_pows[c] = beta.power(c)
        term = beta_pows[c].scale(n)
        for k in ids:
            term = term.mul(pool.polys[k], order)
            if not term:
                break
        for m, v in term.terms.items():
            out[m] = out.get(m, 0) + v
    return Polynomial({m: v for m, v in out.items() if v})


def _permutation_sum(M: SymbolicMatrix, perms, beta, order) -> Polynomial:
    pool = _Pool()
    cells = _cell_ids(M, pool)
    counts: Counter = Counter()
    for p in perms:
        ids = []
        for x, y in enumerate(p.target):
            k = cells[x][y]
            if k < 0:
                break
            ids.append(k)
        else:
            ids.sort()
            counts[(p.cycle_count, tuple(ids))] += 1
    return _collect(counts, pool, Polynomial.coerce(beta), order)


def perm_beta(M: SymbolicMatrix, beta=BETA, order: int | None = None) -> Polynomial:
    """sum over permutations pi of beta^C(pi) prod_i M[i, pi(i)]."""
    if M.dim == 0:
        return Polynomial.const(1)
    return _permutation_sum(M, combinat.permutations(M.dim), beta, order)


def dperm_beta(M: SymbolicMatrix, beta=BETA, order: int | None = None) -> Polynomial:
    """perm_beta restricted to permutations without fixed points."""
    if M.dim == 0:
        return Polynomial.const(1)
    return _permutation_sum(M, combinat.derangements(M.dim), beta, order)


def pperm_btp(M: SymbolicMatrix, v: ExtensionVectors | None = None, beta=BETA,
              order: int | None = None) -> Polynomial:
    """sum over injective partial maps psi of
    beta^C(psi) prod_{dom} M[i, psi(i)] prod_{j not in image} theta_j prod_{k not in domain} phi_k."""
    n = M.dim
    if n == 0:
        return Polynomial.const(1)
    v = v or default_vectors(M)
    if len(v.theta) != n:
        raise ValueError("extension vectors do not match matrix dimension")
    pool = _Pool()
    cells = _cell_ids(M, pool)
    th = [pool.add(x) if x else -1 for x in v.theta]
    ph = [pool.add(x) if x else -1 for x in v.phi]
    counts: Counter = Counter()
    for psi in combinat.partial_maps(n):
        ids = []
        in_image = [False] * n
        ok = True
        for x, y in enumerate(psi.target):
            if y == UNDEFINED:
                k = ph[x]
            else:
                in_image[y] = True
                k = cells[x][y]
            if k < 0:
                ok = False
                break
            ids.append(k)
        if not ok:
            continue
        for j in range(n):
            if not in_image[j]:
                if th[j] < 0:
                    ok = False
                    break
                ids.append(th[j])
        if ok:
            ids.sort()
            counts[(psi.induced_cycle_count, tuple(ids))] += 1
    return _collect(counts, pool, Polynomial.coerce(beta), order)


def pperm(M: SymbolicMatrix) -> Polynomial:
    """Plain partial permanent: every injective partial map, product over its domain."""
    one = Polynomial.const(1)
    ones = tuple(one for _ in range(M.dim))
    return pperm_btp(M, ExtensionVectors(ones, ones), beta=1)


def det(M: SymbolicMatrix) -> Polynomial:
    """Determinant by Laplace expansion along the first row (memoised on the
    remaining column set).  Independent of the permanent code paths."""
    n = M.dim
    e = M.entries
    memo: Dict[Tuple[int, Tuple[int, ...]], Polynomial] = {}

    def minor(row: int, cols: Tuple[int, ...]) -> Polynomial:
        if row == n:
            return Polynomial.const(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Polynomial()
        for k, c in enumerate(cols):
            x = e[row][c]
            if not x:
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1:])
            term = x * sub
            total = total + (term if k % 2 == 0 else -term)
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


# -- JSON matrix input ------------------------------------------------------

def matrix_from_json(obj) -> SymbolicMatrix:
    """{"n": int, "entries": [[expr, ...], ...]}.  An expr is a rational "p/q",
    a variable token such as "A(1,2)", or any serialised polynomial.  Missing
    rows, missing cells and nulls default to A(i,j)."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("matrix JSON must be an object with key 'n'")
    n = int(obj["n"])
    if n < 0:
        raise ValueError("n must be non-negative")
    given = obj.get("entries") or []
    if len(given) > n or any(len(row) > n for row in given):
        raise ValueError("entries exceed the declared dimension")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = given[i][j] if i < len(given) and j < len(given[i]) else None
            if x is None:
                row.append(var("A", i + 1, j + 1))
            elif isinstance(x, (int, float)) and not isinstance(x, bool):
                row.append(Polynomial.const(Fraction(str(x))))
            else:
                row.append(parse_polynomial(str(x)))
        rows.append(row)
    return matrix(rows)
