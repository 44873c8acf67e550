"""Brute-force reference computations that share no code with the package.

Everything is dense lists of Fractions and plain Gaussian elimination.
"""

from fractions import Fraction
from itertools import product


def dense_rank(rows):
    m = [list(map(Fraction, r)) for r in rows]
    if not m or not m[0]:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def to_dense(mat):
    """Dense rows of a package SparseMatrix (only used to feed the oracle)."""
    return [[mat.get(i, j) for j in range(mat.cols)] for i in range(mat.rows)]


def _mul(table, u, v):
    out = {}
    for i, x in u.items():
        for j, y in v.items():
            for k, z in table[i][j].items():
                out[k] = out.get(k, 0) + x * y * z
    return {k: Fraction(x) for k, x in out.items() if x}


class HochschildOracle:
    """Hochschild complex ``A^{⊗(n+1)}`` with the Hochschild boundary and the signed rotation."""

    def __init__(self, table, dim):
        self.table = table
        self.dim = dim

    def words(self, n):
        return list(product(range(self.dim), repeat=n + 1))

    def b(self, n):
        src, dst = self.words(n), self.words(n - 1)
        index = {w: i for i, w in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for c, w in enumerate(src):
            for i in range(n + 1):
                sign = (-1) ** i
                if i < n:
                    prod = self.table[w[i]][w[i + 1]]
                    for k, x in prod.items():
                        mat[index[w[:i] + (k,) + w[i + 2:]]][c] += sign * x
                else:
                    prod = self.table[w[n]][w[0]]
                    for k, x in prod.items():
                        mat[index[(k,) + w[1:n]]][c] += sign * x
        return mat

    def one_minus_lambda(self, n):
        """``1 - λ`` with ``λ(a0⊗..⊗an) = (-1)^n (an⊗a0⊗..⊗a(n-1))``."""
        src = self.words(n)
        index = {w: i for i, w in enumerate(src)}
        mat = [[Fraction(0)] * len(src) for _ in src]
        for c, w in enumerate(src):
            mat[c][c] += 1
            mat[index[(w[-1],) + w[:-1]]][c] -= (-1) ** n
        return mat

    def hh_dims(self, top):
        ranks = {n: dense_rank(self.b(n)) for n in range(1, top + 2)}
        return [self.dim ** (n + 1) - ranks.get(n, 0) - ranks[n + 1] for n in range(top + 1)]

    def connes_hc_dims(self, top):
        """Homology of the Connes complex ``C_n / (1 - λ)``, valid over Q."""
        rl = {n: dense_rank(self.one_minus_lambda(n)) for n in range(top + 2)}

        def induced_rank(n):
            # im of b on the quotient = (im b + im(1-λ)) / im(1-λ) in degree n-1
            b, t = self.b(n), self.one_minus_lambda(n - 1)
            joined = [rb + rt for rb, rt in zip(b, t)]
            return dense_rank(joined) - rl[n - 1]

        ib = {n: induced_rank(n) for n in range(1, top + 2)}
        return [self.dim ** (n + 1) - rl[n] - ib.get(n, 0) - ib[n + 1] for n in range(top + 1)]


class NormalizedBarOracle:
    """Normalized Hochschild complex ``A ⊗ Ā^{⊗n}`` for an algebra whose unit is basis element ``u``.

    ``Ā`` is spanned by the other basis elements; products landing on the
    unit are dropped inside the bar slots.
    """

    def __init__(self, table, dim, unit_index):
        self.table = table
        self.dim = dim
        self.u = unit_index
        self.bar = [i for i in range(dim) if i != unit_index]

    def words(self, n):
        return [(a,) + rest for a in range(self.dim) for rest in product(self.bar, repeat=n)]

    def b(self, n):
        src, dst = self.words(n), self.words(n - 1)
        index = {w: i for i, w in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for c, w in enumerate(src):
            for i in range(n + 1):
                sign = (-1) ** i
                if i < n:
                    for k, x in self.table[w[i]][w[i + 1]].items():
                        nw = w[:i] + (k,) + w[i + 2:]
                        if i > 0 and k == self.u:
                            continue
                        mat[index[nw]][c] += sign * x
                else:
                    for k, x in self.table[w[n]][w[0]].items():
                        mat[index[(k,) + w[1:n]]][c] += sign * x
        return mat

    def hh_dims(self, top):
        size = {n: len(self.words(n)) for n in range(top + 2)}
        ranks = {n: dense_rank(self.b(n)) for n in range(1, top + 2)}
        return [size[n] - ranks.get(n, 0) - ranks[n + 1] for n in range(top + 1)]


def table_of(algebra):
    """Structure constants of a package Algebra as plain dicts."""
    return [[dict(algebra.table[i][j]) for j in range(algebra.dim)] for i in range(algebra.dim)]


def truncated_table(n):
    """``Q[x]/(x^n)`` in the basis ``1, x, .., x^(n-1)``, written out by hand."""
    return [[({i + j: Fraction(1)} if i + j < n else {}) for j in range(n)] for i in range(n)]
