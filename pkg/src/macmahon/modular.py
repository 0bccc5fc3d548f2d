"""Randomised checking of the identities over GF(p).

Every variable gets an independent uniform residue.  Variables of grading
weight 1 also carry a formal parameter t, so both sides become truncated
power series in t with residue coefficients, and the t^N coefficient is the
grade-N slice.  The comparison is exact per coefficient; a false match on a
wrong identity needs an unlucky root of a nonzero polynomial (Schwartz-Zippel).

The left-hand sides are computed without the symbolic engine: a permanent of
a multiset-indexed matrix only depends on how many copies of each label
remain, so permutations (and partial maps) are counted by a memoised walk
over remaining-count vectors, building one cycle or necklace at a time from
the smallest remaining position.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from functools import lru_cache
from typing import List, Sequence

from . import graphs
from .combinat import multisets_of_size
from .theorems import VerificationReport

MODULAR_THEOREMS = ("MMT", "SubMMT", "PPermMMT", "SubPPermMMT", "DerMMT", "SubDerMMT",
                    "Remark", "Lemma", "Proposition1")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_modulus(p: int, order: int) -> None:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p <= order:
        raise ValueError(f"modulus {p} must exceed the order {order} (series denominators)")


class Field:
    """Truncated power series in t over GF(p), as coefficient lists."""

    def __init__(self, p: int, order: int):
        self.p = p
        self.order = order

    def zero(self) -> List[int]:
        return [0] * (self.order + 1)

    def const(self, c: int) -> List[int]:
        s = self.zero()
        s[0] = c % self.p
        return s

    def graded(self, c: int, weight: int) -> List[int]:
        s = self.zero()
        if weight <= self.order:
            s[weight] = c % self.p
        return s

    def add(self, a, b):
        p = self.p
        return [(x + y) % p for x, y in zip(a, b)]

    def sub(self, a, b):
        p = self.p
        return [(x - y) % p for x, y in zip(a, b)]

    def scale(self, a, c):
        p = self.p
        return [x * c % p for x in a]

    def mul(self, a, b):
        p, n = self.p, self.order + 1
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return [x % p for x in out]

    def exp(self, s):
        """exp(s) for s with zero constant term: m E_m = sum_k k s_k E_{m-k}."""
        if s[0] % self.p:
            raise ValueError("exp needs a series without constant term")
        p = self.p
        e = [1] + [0] * self.order
        for m in range(1, self.order + 1):
            acc = sum(k * s[k] * e[m - k] for k in range(1, m + 1))
            e[m] = acc % p * pow(m, -1, p) % p
        return e

    # matrices are lists of rows of series
    def mat_mul(self, X, Y):
        n, k, m = len(X), len(Y), len(Y[0]) if Y else 0
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.zero()
                for l in range(k):
                    if any(X[i][l]) and any(Y[l][j]):
                        acc = self.add(acc, self.mul(X[i][l], Y[l][j]))
                row.append(acc)
            out.append(row)
        return out

    def identity(self, n):
        return [[self.const(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def neumann(self, A):
        n = len(A)
        total = self.identity(n)
        P = self.identity(n)
        for _ in range(self.order):
            P = self.mat_mul(P, A)
            total = [[self.add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(total, P)]
        return total

    def log_det_inverse(self, A):
        """sum_{k=1}^{order} Tr(A^k)/k."""
        n = len(A)
        out = self.zero()
        P = self.identity(n)
        for k in range(1, self.order + 1):
            P = self.mat_mul(P, A)
            tr = self.zero()
            for i in range(n):
                tr = self.add(tr, P[i][i])
            out = self.add(out, self.scale(tr, pow(k, -1, self.p)))
        return out


# -- random substitution ---------------------------------------------------

class Point:
    """Residues for every variable of an (n', n) instance."""

    def __init__(self, n: int, n_prime: int, p: int, seed: int):
        rng = random.Random(seed)
        draw = lambda: rng.randrange(p)
        self.p = p
        self.beta = draw()
        self.A = [[draw() for _ in range(n)] for _ in range(n)]
        self.B = [[draw() for _ in range(n_prime)] for _ in range(n_prime)]
        self.U = [[draw() for _ in range(n)] for _ in range(n_prime)]
        self.V = [[draw() for _ in range(n_prime)] for _ in range(n)]
        self.theta = [draw() for _ in range(n)]
        self.phi = [draw() for _ in range(n)]
        self.thetaP = [draw() for _ in range(n_prime)]
        self.phiP = [draw() for _ in range(n_prime)]


# -- left-hand sides by counting walks over remaining multiplicities ---------

class _Counter:
    """Numeric permanent variants of the block matrix [[B, U], [V, A]] indexed
    by n' distinct primed labels and a multiset of the n plain labels.

    W is the label-level matrix (n'+n square), theta/phi label-level vectors;
    a state's ``counts`` lists how many positions of each label remain.
    """

    def __init__(self, W, theta, phi, beta, p, derange=False):
        self.W, self.theta, self.phi = W, theta, phi
        self.beta, self.p, self.derange = beta, p, derange
        self.L = len(W)
        self.full = lru_cache(maxsize=None)(self._full)
        self.cycle = lru_cache(maxsize=None)(self._cycle)
        self.partial = lru_cache(maxsize=None)(self._partial)
        self.forward = lru_cache(maxsize=None)(self._forward)
        self.backward = lru_cache(maxsize=None)(self._backward)

    @staticmethod
    def _first(counts):
        for s, c in enumerate(counts):
            if c:
                return s
        return -1

    @staticmethod
    def _take(counts, j):
        c = list(counts)
        c[j] -= 1
        return tuple(c)

    def _full(self, counts) -> int:
        s = self._first(counts)
        if s < 0:
            return 1
        return self.cycle(self._take(counts, s), s, s, 0)

    def _cycle(self, counts, s, l, steps) -> int:
        """Weighted count of ways to finish the open cycle (start label s,
        current label l) and then the rest."""
        p, W = self.p, self.W
        total = 0
        if not (self.derange and steps == 0):
            total = self.beta * W[l][s] % p * self.full(counts)
        for j, c in enumerate(counts):
            if c:
                total += c * W[l][j] % p * self.cycle(self._take(counts, j), s, j, 1)
        return total % p

    def _partial(self, counts) -> int:
        s = self._first(counts)
        if s < 0:
            return 1
        return self.forward(self._take(counts, s), s, s)

    def _forward(self, counts, s, l) -> int:
        p, W = self.p, self.W
        total = self.beta * W[l][s] % p * self.partial(counts)
        total += self.phi[l] * self.backward(counts, s)
        for j, c in enumerate(counts):
            if c:
                total += c * W[l][j] % p * self.forward(self._take(counts, j), s, j)
        return total % p

    def _backward(self, counts, f) -> int:
        p, W = self.p, self.W
        total = self.theta[f] * self.partial(counts)
        for j, c in enumerate(counts):
            if c:
                total += c * W[j][f] % p * self.backward(self._take(counts, j), j)
        return total % p


def _label_matrix(pt: Point, n_prime: int, n: int):
    W = []
    for a in range(n_prime + n):
        row = []
        for b in range(n_prime + n):
            if a < n_prime and b < n_prime:
                row.append(pt.B[a][b])
            elif a < n_prime:
                row.append(pt.U[a][b - n_prime])
            elif b < n_prime:
                row.append(pt.V[a - n_prime][b])
            else:
                row.append(pt.A[a - n_prime][b - n_prime])
        W.append(row)
    return W, pt.thetaP + pt.theta, pt.phiP + pt.phi


def lhs_series(kind: str, pt: Point, n_prime: int, n: int, order: int) -> List[int]:
    """Grade-N coefficients of sum_r (1/r!) X(r), X the chosen permanent variant."""
    W, theta, phi = _label_matrix(pt, n_prime, n)
    counter = _Counter(W, theta, phi, pt.beta, pt.p, derange=(kind == "derangement"))
    evaluate = counter.partial if kind == "partial" else counter.full
    p = pt.p
    out = []
    for N in range(order + 1):
        acc = 0
        for r in multisets_of_size(n, N):
            inv = pow(math.prod(math.factorial(x) for x in r.r) % p, -1, p)
            acc += evaluate((1,) * n_prime + r.r) * inv
        out.append(acc % p)
    return out


# -- right-hand sides ----------------------------------------------------

def _series_A(F: Field, pt: Point):
    return [[F.graded(x, 1) for x in row] for row in pt.A]


def _det_factor(F: Field, pt: Point):
    return F.exp(F.scale(F.log_det_inverse(_series_A(F, pt)), pt.beta))


def _trace_factor(F: Field, pt: Point):
    tr = sum(pt.A[i][i] for i in range(len(pt.A)))
    return F.exp(F.graded(-pt.beta * tr, 1))


def _necklace_factor(F: Field, pt: Point):
    R = F.neumann(_series_A(F, pt))
    theta = [[F.graded(x, 1) for x in pt.theta]]
    phi = [[F.const(x)] for x in pt.phi]
    return F.exp(F.mat_mul(F.mat_mul(theta, R), phi)[0][0])


def _block_tildes(F: Field, pt: Point):
    """Btilde, thetatilde, phitilde as series."""
    R = F.neumann(_series_A(F, pt))
    U = [[F.graded(x, 1) for x in row] for row in pt.U]
    V = [[F.const(x) for x in row] for row in pt.V]
    UR = F.mat_mul(U, R)
    Bt = F.mat_mul(UR, V)
    Bt = [[F.add(x, F.const(b)) for x, b in zip(row, brow)] for row, brow in zip(Bt, pt.B)]
    theta = [[F.graded(x, 1) for x in pt.theta]]
    tt = F.mat_mul(F.mat_mul(theta, R), V)[0]
    tt = [F.add(x, F.const(c)) for x, c in zip(tt, pt.thetaP)]
    phi = [[F.const(x)] for x in pt.phi]
    pt_ = [row[0] for row in F.mat_mul(UR, phi)]
    pt_ = [F.add(x, F.const(c)) for x, c in zip(pt_, pt.phiP)]
    return Bt, tt, pt_


def _perm_beta_series(F: Field, M, beta):
    n = len(M)
    total = F.zero()
    for perm in itertools.permutations(range(n)):
        term = F.const(pow(beta, _cycles(perm), F.p))
        for i, j in enumerate(perm):
            term = F.mul(term, M[i][j])
        total = F.add(total, term)
    return total


def _cycles(target) -> int:
    seen, count = set(), 0
    for s in range(len(target)):
        if s in seen:
            continue
        x = s
        while x is not None and x not in seen:
            seen.add(x)
            x = target[x]
        if x == s:
            count += 1
    return count


def _pperm_btp_series(F: Field, M, theta, phi, beta):
    n = len(M)
    total = F.zero()
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img in itertools.permutations(range(n), k):
                target = [None] * n
                for x, y in zip(dom, img):
                    target[x] = y
                term = F.const(pow(beta, _cycles(target), F.p))
                for x in range(n):
                    term = F.mul(term, phi[x] if target[x] is None else M[x][target[x]])
                for j in set(range(n)) - set(img):
                    term = F.mul(term, theta[j])
                total = F.add(total, term)
    return total


def rhs_series(theorem: str, F: Field, pt: Point) -> List[int]:
    det = _det_factor(F, pt)
    if theorem == "MMT":
        return det
    if theorem == "DerMMT":
        return F.mul(_trace_factor(F, pt), det)
    if theorem == "PPermMMT":
        return F.mul(_necklace_factor(F, pt), det)
    Bt, tt, pht = _block_tildes(F, pt)
    if theorem == "SubMMT":
        return F.mul(_perm_beta_series(F, Bt, pt.beta), det)
    if theorem == "SubPPermMMT":
        inner = _pperm_btp_series(F, Bt, tt, pht, pt.beta)
        return F.mul(F.mul(_necklace_factor(F, pt), inner), det)
    if theorem == "SubDerMMT":
        Bh = [[F.sub(x, F.const(pt.B[i][i])) if i == j else x for j, x in enumerate(row)]
              for i, row in enumerate(Bt)]
        return F.mul(F.mul(_trace_factor(F, pt), _perm_beta_series(F, Bh, pt.beta)), det)
    raise ValueError(f"no series right-hand side for {theorem}")


_LHS_KIND = {
    "MMT": "full", "SubMMT": "full", "PPermMMT": "partial", "SubPPermMMT": "partial",
    "DerMMT": "derangement", "SubDerMMT": "derangement",
}
_BLOCK = {"SubMMT", "SubPPermMMT", "SubDerMMT", "Lemma"}


# -- finite identities over GF(p) -------------------------------------------

def det_mod(M: Sequence[Sequence[int]], p: int) -> int:
    """Determinant by Gaussian elimination over GF(p)."""
    A = [[x % p for x in row] for row in M]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return d % p


def _det_series(F: Field, M) -> List[int]:
    """Laplace expansion with series entries."""
    n = len(M)
    if n == 0:
        return F.const(1)
    total = F.zero()
    for k in range(n):
        if not any(M[0][k]):
            continue
        minor = [row[:k] + row[k + 1:] for row in M[1:]]
        term = F.mul(M[0][k], _det_series(F, minor))
        total = F.add(total, term) if k % 2 == 0 else F.sub(total, term)
    return total


def _finite_sides(theorem: str, pt: Point, n_prime: int, n: int, F: Field):
    p = pt.p
    if theorem == "Remark":
        # the n x n residues drawn for A play the role of B here
        Bm = pt.A
        lhs = 0
        for r in itertools.product((0, 1), repeat=n):
            idx = [i for i in range(n) if r[i]]
            lhs += det_mod([[Bm[i][j] for j in idx] for i in idx], p)
        rhs = det_mod([[Bm[i][j] + (i == j) for j in range(n)] for i in range(n)], p)
        return [lhs % p], [rhs]
    if theorem == "Lemma":
        W, _, _ = _label_matrix(pt, n_prime, n)
        lhs = 0
        for r in itertools.product((0, 1), repeat=n):
            idx = list(range(n_prime)) + [n_prime + i for i in range(n) if r[i]]
            lhs += det_mod([[W[a][b] for b in idx] for a in idx], p)
        dim = n_prime + n
        rhs_m = [[(W[a][b] if (a < n_prime) == (b < n_prime) else -W[a][b]) + (a == b >= n_prime)
                  for b in range(dim)] for a in range(dim)]
        return [lhs % p], [det_mod(rhs_m, p)]
    if theorem == "Proposition1":
        lhs = F.const(1)
        for word in graphs.lyndon_words(n, F.order):
            w = 1
            for k in range(len(word)):
                w = w * pt.A[word[k] - 1][word[(k + 1) % len(word)] - 1] % p
            lhs = F.mul(lhs, F.sub(F.const(1), F.graded(w, len(word))))
        I_minus_A = [[F.sub(F.const(1 if i == j else 0), F.graded(pt.A[i][j], 1)) for j in range(n)]
                     for i in range(n)]
        return lhs, _det_series(F, I_minus_A)
    raise ValueError(theorem)


def modular_verify(theorem: str, n: int, n_prime: int, order: int, modulus: int, seed: int,
                   corrupt: bool = False) -> VerificationReport:
    """Compare both sides at one random point.  ``corrupt`` perturbs the right
    side (negative control)."""
    if theorem not in MODULAR_THEOREMS:
        raise ValueError(f"theorem {theorem} has no modular check")
    check_modulus(modulus, order)
    t0 = time.perf_counter()
    block = theorem in _BLOCK
    if block and n_prime < 1:
        raise ValueError(f"{theorem} needs n' >= 1")
    np_ = n_prime if block else 0
    pt = Point(n, np_, modulus, seed)
    F = Field(modulus, order)
    if theorem in _LHS_KIND:
        lhs = lhs_series(_LHS_KIND[theorem], pt, np_, n, order)
        rhs = rhs_series(theorem, F, pt)
    else:
        lhs, rhs = _finite_sides(theorem, pt, np_, n, F)
    if corrupt:
        rhs = list(rhs)
        rhs[-1] = (rhs[-1] + 1) % modulus
    mismatch = None
    for g, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            mismatch = {"monomial": f"t^{g}", "lhs": str(a), "rhs": str(b)}
            break
    report_order = order if theorem in _LHS_KIND or theorem == "Proposition1" else n
    return VerificationReport(
        theorem, n, n_prime if block else None, report_order, mismatch is None,
        sum(1 for x in lhs if x), sum(1 for x in rhs if x), mismatch,
        int(round((time.perf_counter() - t0) * 1000)), mode="modular",
        extra={"modulus": modulus, "seed": seed},
    )
