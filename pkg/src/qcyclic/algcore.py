"""Finite-dimensional unital associative Q-algebras given by structure constants.

Elements are sparse vectors ``{basis_index: Fraction}``.  Every constructor in
this module returns objects that pass :func:`validate_algebra`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .exactla import LinAlgError, SparseMatrix, Subspace, as_scalar, decompose, rank, solve

Vector = dict[int, Fraction]


class AlgebraError(ValueError):
    pass


def _clean(vec: Mapping[int, object]) -> Vector:
    out = {}
    for k, v in vec.items():
        v = as_scalar(v)
        if v:
            out[k] = v
    return out


def _axpy(out: dict, coeff: Fraction, vec: Mapping[int, Fraction]) -> None:
    for k, v in vec.items():
        nv = out.get(k, 0) + coeff * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)


class Algebra:
    """Unital associative algebra over Q with basis ``e_0 .. e_{dim-1}``.

    ``table[i][j]`` is the vector ``e_i * e_j``.
    """

    def __init__(self, basis_labels: Sequence[str], table, unit: Mapping[int, object], name: str = ""):
        self.basis_labels = tuple(str(s) for s in basis_labels)
        self.dim = len(self.basis_labels)
        if len(table) != self.dim or any(len(row) != self.dim for row in table):
            raise AlgebraError(f"structure table must be {self.dim}x{self.dim}")
        self.table = tuple(tuple(_clean(v) for v in row) for row in table)
        for row in self.table:
            for v in row:
                if any(not 0 <= k < self.dim for k in v):
                    raise AlgebraError("structure constant refers to a missing basis element")
        self.unit = _clean(unit)
        self.name = name

    def __repr__(self) -> str:
        return f"Algebra({self.name or 'unnamed'}, dim={self.dim})"

    def basis_vector(self, i: int) -> Vector:
        return {i: Fraction(1)}

    def mul(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Vector:
        out: dict = {}
        for i, a in u.items():
            row = self.table[i]
            for j, b in v.items():
                prod_ij = row[j]
                if prod_ij:
                    _axpy(out, a * b, prod_ij)
        return out

    def left_matrix(self, x: Mapping[int, Fraction]) -> SparseMatrix:
        """Matrix of ``v -> x v``."""
        return SparseMatrix.from_columns(self.dim, [self.mul(x, {j: Fraction(1)}) for j in range(self.dim)])

    def right_matrix(self, x: Mapping[int, Fraction]) -> SparseMatrix:
        """Matrix of ``v -> v x``."""
        return SparseMatrix.from_columns(self.dim, [self.mul({j: Fraction(1)}, x) for j in range(self.dim)])

    def unit_is_basis(self) -> int | None:
        if len(self.unit) == 1:
            (k, v), = self.unit.items()
            if v == 1:
                return k
        return None

    def rebased(self, basis: SparseMatrix, labels: Sequence[str] | None = None, name: str = "") -> "Algebra":
        """The same algebra written in the basis given by the columns of ``basis``."""
        n = self.dim
        if basis.shape != (n, n) or rank(basis) != n:
            raise AlgebraError("rebasing needs an invertible square matrix")
        inv = solve(basis, SparseMatrix.identity(n))
        cols = [dict(basis.column(j)) for j in range(n)]
        table = [[inv.apply(self.mul(cols[i], cols[j])) for j in range(n)] for i in range(n)]
        unit = inv.apply(self.unit)
        if labels is None:
            labels = [f"b{i}" for i in range(n)]
        return Algebra(labels, table, unit, name or self.name)


@dataclass
class AlgebraReport:
    valid: bool
    failure: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate_algebra(a: Algebra) -> AlgebraReport:
    """Check associativity on all basis triples and the two-sided unit."""
    n = a.dim
    for i, j, k in product(range(n), repeat=3):
        lhs = a.mul(a.table[i][j], {k: Fraction(1)})
        rhs = a.mul({i: Fraction(1)}, a.table[j][k])
        if lhs != rhs:
            return AlgebraReport(
                False,
                f"(e{i} e{j}) e{k} != e{i} (e{j} e{k}) [{a.basis_labels[i]}, {a.basis_labels[j]}, {a.basis_labels[k]}]",
                (i, j, k),
            )
    for i in range(n):
        e = {i: Fraction(1)}
        if a.mul(a.unit, e) != e or a.mul(e, a.unit) != e:
            return AlgebraReport(False, f"unit does not act as identity on e{i}", (i,))
    return AlgebraReport(True)


# --------------------------------------------------------------------------
# maps


class AlgebraMap:
    """Linear map ``src -> dst`` (matrix ``dst.dim x src.dim``) that is multiplicative and unital."""

    def __init__(self, src: Algebra, dst: Algebra, matrix: SparseMatrix, *, check: bool = True):
        if matrix.shape != (dst.dim, src.dim):
            raise AlgebraError(f"map matrix has shape {matrix.shape}, expected {(dst.dim, src.dim)}")
        self.src, self.dst, self.matrix = src, dst, matrix
        if check:
            problem = self.failure()
            if problem:
                raise AlgebraError(problem)

    def __call__(self, v: Mapping[int, Fraction]) -> Vector:
        return self.matrix.apply(v)

    def failure(self) -> str | None:
        s = self.src
        for i, j in product(range(s.dim), repeat=2):
            lhs = self(s.table[i][j])
            rhs = self.dst.mul(self({i: Fraction(1)}), self({j: Fraction(1)}))
            if lhs != rhs:
                return f"map is not multiplicative on ({s.basis_labels[i]}, {s.basis_labels[j]})"
        if self(s.unit) != self.dst.unit:
            return "map does not preserve the unit"
        return None

    def is_surjective(self) -> bool:
        return rank(self.matrix) == self.dst.dim

    @classmethod
    def identity(cls, a: Algebra) -> "AlgebraMap":
        return cls(a, a, SparseMatrix.identity(a.dim), check=False)

    def __matmul__(self, other: "AlgebraMap") -> "AlgebraMap":
        return AlgebraMap(other.src, self.dst, self.matrix @ other.matrix, check=False)


# --------------------------------------------------------------------------
# bimodules


class Bimodule:
    """``A``-bimodule on ``Q^dim``; ``left[i]``/``right[i]`` act by ``e_i``."""

    def __init__(self, algebra: Algebra, dim: int, left: Sequence[SparseMatrix], right: Sequence[SparseMatrix],
                 labels: Sequence[str] | None = None, *, check: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.left = list(left)
        self.right = list(right)
        self.labels = tuple(labels) if labels is not None else tuple(f"m{i}" for i in range(dim))
        if len(self.left) != algebra.dim or len(self.right) != algebra.dim:
            raise AlgebraError("need one left and one right action matrix per algebra basis element")
        for m in self.left + self.right:
            if m.shape != (dim, dim):
                raise AlgebraError("action matrices must be dim x dim")
        if check:
            problem = self.failure()
            if problem:
                raise AlgebraError(problem)

    def act_left(self, x: Mapping[int, Fraction]) -> SparseMatrix:
        out = SparseMatrix.zeros(self.dim, self.dim)
        for i, c in x.items():
            out = out + self.left[i] * c
        return out

    def act_right(self, x: Mapping[int, Fraction]) -> SparseMatrix:
        out = SparseMatrix.zeros(self.dim, self.dim)
        for i, c in x.items():
            out = out + self.right[i] * c
        return out

    def failure(self) -> str | None:
        a = self.algebra
        ident = SparseMatrix.identity(self.dim)
        if self.act_left(a.unit) != ident or self.act_right(a.unit) != ident:
            return "unit does not act as the identity"
        for i, j in product(range(a.dim), repeat=2):
            if self.act_left(a.table[i][j]) != self.left[i] @ self.left[j]:
                return f"left action not associative on ({a.basis_labels[i]}, {a.basis_labels[j]})"
            # m (e_i e_j) = (m e_i) e_j
            if self.act_right(a.table[i][j]) != self.right[j] @ self.right[i]:
                return f"right action not associative on ({a.basis_labels[i]}, {a.basis_labels[j]})"
            if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                return f"left and right actions do not commute on ({a.basis_labels[i]}, {a.basis_labels[j]})"
        return None

    @classmethod
    def regular(cls, a: Algebra) -> "Bimodule":
        left = [a.left_matrix({i: Fraction(1)}) for i in range(a.dim)]
        right = [a.right_matrix({i: Fraction(1)}) for i in range(a.dim)]
        return cls(a, a.dim, left, right, [f"{s}'" for s in a.basis_labels], check=False)

    @classmethod
    def scalar(cls, a: Algebra, dim: int, augmentation: Sequence[object] | None = None) -> "Bimodule":
        """``Q^dim`` with both actions through an augmentation ``A -> Q``.

        With ``a`` of dimension one the augmentation defaults to the unit coefficient.
        """
        if augmentation is None:
            if a.dim != 1:
                raise AlgebraError("an augmentation is required for algebras of dimension > 1")
            augmentation = [1 / a.unit[0]]
        mats = [SparseMatrix.scalar(dim, c) for c in augmentation]
        return cls(a, dim, mats, mats, None)

    @staticmethod
    def direct_sum(mods: Sequence["Bimodule"]) -> "Bimodule":
        if not mods:
            raise AlgebraError("direct sum of no bimodules")
        a = mods[0].algebra
        left = [SparseMatrix.block_diag([m.left[i] for m in mods]) for i in range(a.dim)]
        right = [SparseMatrix.block_diag([m.right[i] for m in mods]) for i in range(a.dim)]
        labels = []
        for t, m in enumerate(mods, start=1):
            labels += [f"{s}_{t}" for s in m.labels]
        return Bimodule(a, sum(m.dim for m in mods), left, right, labels, check=False)


# --------------------------------------------------------------------------
# ideals


class Ideal:
    """Two-sided ideal of ``parent`` spanned by the columns of ``basis.basis``."""

    def __init__(self, parent: Algebra, basis: Subspace, *, check: bool = True):
        if basis.ambient_dim != parent.dim:
            raise AlgebraError("ideal basis lives in the wrong space")
        self.parent = parent
        self.basis = basis
        if check:
            for j in range(basis.dim):
                v = dict(basis.basis.column(j))
                for i in range(parent.dim):
                    e = {i: Fraction(1)}
                    for prod_v in (parent.mul(e, v), parent.mul(v, e)):
                        if prod_v and not basis.contains(prod_v):
                            raise AlgebraError(f"span is not closed under multiplication by {parent.basis_labels[i]}")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def vectors(self) -> list[Vector]:
        return [dict(self.basis.basis.column(j)) for j in range(self.dim)]

    @classmethod
    def zero(cls, a: Algebra) -> "Ideal":
        return cls(a, Subspace.zero(a.dim), check=False)

    @classmethod
    def whole(cls, a: Algebra) -> "Ideal":
        return cls(a, Subspace.whole(a.dim), check=False)

    @classmethod
    def generated(cls, a: Algebra, generators: Sequence[Mapping[int, object]]) -> "Ideal":
        """Smallest two-sided ideal containing the generators."""
        gens = [_clean(g) for g in generators]
        vecs = []
        for g in gens:
            for i, j in product(range(a.dim), repeat=2):
                v = a.mul(a.mul({i: Fraction(1)}, g), {j: Fraction(1)})
                if v:
                    vecs.append(v)
        span = Subspace.span(a.dim, SparseMatrix.from_columns(a.dim, vecs))
        return cls(a, span)

    def contains(self, v: Mapping[int, Fraction]) -> bool:
        return self.basis.contains(v)

    def __le__(self, other: "Ideal") -> bool:
        return self.basis <= other.basis

    def __repr__(self) -> str:
        return f"Ideal(dim={self.dim} in {self.parent!r})"


def product_ideal(i: Ideal, j: Ideal) -> Ideal:
    a = i.parent
    vecs = [a.mul(x, y) for x in i.vectors() for y in j.vectors()]
    vecs = [v for v in vecs if v]
    return Ideal(a, Subspace.span(a.dim, SparseMatrix.from_columns(a.dim, vecs)), check=False)


def ideal_power(i: Ideal, n: int) -> Ideal:
    """``I^n``; ``I^0`` is the whole algebra."""
    if n < 0:
        raise AlgebraError("ideal power must be non-negative")
    if n == 0:
        return Ideal.whole(i.parent)
    out = i
    for _ in range(n - 1):
        if out.dim == 0:
            break
        out = product_ideal(out, i)
    return out


# --------------------------------------------------------------------------
# constructions


def truncated_polynomial(n: int) -> tuple[Algebra, Ideal]:
    """``Q[x]/(x^n)`` with basis ``1, x, .., x^(n-1)`` and the ideal ``(x)``."""
    if n < 1:
        raise AlgebraError("truncated_polynomial needs n >= 1")
    labels = ["1"] + [("x" if k == 1 else f"x^{k}") for k in range(1, n)]
    table = [[({i + j: 1} if i + j < n else {}) for j in range(n)] for i in range(n)]
    a = Algebra(labels, table, {0: 1}, name=f"Q[x]/(x^{n})")
    basis = SparseMatrix.from_columns(n, [{k: 1} for k in range(1, n)])
    return a, Ideal(a, Subspace(n, basis, check=False), check=False)


def dual_numbers(var: str = "e") -> Algebra:
    a, _ = truncated_polynomial(2)
    return Algebra(["1", var], a.table, a.unit, name=f"Q[{var}]/({var}^2)")


def rationals() -> Algebra:
    return Algebra(["1"], [[{0: 1}]], {0: 1}, name="Q")


def product_algebra(algebras: Sequence[Algebra], name: str = "") -> Algebra:
    """Cartesian product ``A_1 x .. x A_r`` with componentwise multiplication."""
    offs = []
    total = 0
    for a in algebras:
        offs.append(total)
        total += a.dim
    table = [[{} for _ in range(total)] for _ in range(total)]
    labels = []
    unit: dict = {}
    for t, (a, off) in enumerate(zip(algebras, offs)):
        labels += [f"{s}@{t}" for s in a.basis_labels]
        for i in range(a.dim):
            for j in range(a.dim):
                table[off + i][off + j] = {off + k: v for k, v in a.table[i][j].items()}
        for k, v in a.unit.items():
            unit[off + k] = v
    return Algebra(labels, table, unit, name or " x ".join(a.name or "A" for a in algebras))


def upper_triangular(n: int = 2) -> Algebra:
    """Upper triangular ``n x n`` matrices, basis ``E_ij`` with ``i <= j``."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {p: k for k, p in enumerate(pairs)}
    table = []
    for (i, j) in pairs:
        row = []
        for (k, l) in pairs:
            row.append({index[(i, l)]: 1} if j == k else {})
        table.append(row)
    unit = {index[(i, i)]: 1 for i in range(n)}
    return Algebra([f"E{i}{j}" for (i, j) in pairs], table, unit, name=f"T_{n}(Q)")


def square_zero_extension(b: Algebra, m: Bimodule) -> tuple[Algebra, Ideal]:
    """``B ⋉ M`` on ``B ⊕ M`` with ``(b, m)(b', m') = (bb', bm' + mb')``."""
    if m.algebra is not b:
        raise AlgebraError("bimodule is over a different algebra")
    problem = m.failure()
    if problem:
        raise AlgebraError(problem)
    nb, nm = b.dim, m.dim
    n = nb + nm
    table = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(nb):
        for j in range(nb):
            table[i][j] = dict(b.table[i][j])
        for j in range(nm):
            # e_i . m_j
            table[i][nb + j] = {nb + r: v for r, v in m.left[i].column(j).items()}
            # m_j . e_i
            table[nb + j][i] = {nb + r: v for r, v in m.right[i].column(j).items()}
    labels = list(b.basis_labels) + list(m.labels)
    a = Algebra(labels, table, dict(b.unit), name=f"{b.name or 'B'} ⋉ M{nm}")
    basis = SparseMatrix.from_columns(n, [{nb + j: 1} for j in range(nm)])
    return a, Ideal(a, Subspace(n, basis, check=False), check=False)


def _complement(n: int, sub: Subspace) -> list[int]:
    """Standard basis indices completing ``sub`` to a basis of ``Q^n``."""
    from .exactla import Echelon, _to_int_vector

    ech = Echelon(n)
    for j in range(sub.dim):
        ech.add(_to_int_vector(sub.basis.column(j)))
    comp = []
    for k in range(n):
        if ech.add({k: 1}):
            comp.append(k)
    return comp


def quotient_by_ideal(a: Algebra, i: Ideal) -> tuple[Algebra, AlgebraMap]:
    """``A/I`` on a complement basis of standard vectors, plus the projection."""
    comp = _complement(a.dim, i.basis)
    basis = SparseMatrix.hstack([SparseMatrix.from_columns(a.dim, [{k: 1} for k in comp]), i.basis.basis])
    inv = solve(basis, SparseMatrix.identity(a.dim))
    proj = inv.select(rows=list(range(len(comp))))
    table = [[proj.apply(a.table[x][y]) for y in comp] for x in comp]
    q = Algebra([a.basis_labels[k] for k in comp], table, proj.apply(a.unit), name=f"{a.name or 'A'}/I")
    return q, AlgebraMap(a, q, proj, check=False)


# --------------------------------------------------------------------------
# gradings


class GradedAlgebra:
    """Algebra in a homogeneous basis; ``degrees[i]`` is the degree of ``e_i``."""

    def __init__(self, algebra: Algebra, degrees: Sequence[int], *, check: bool = True):
        if len(degrees) != algebra.dim:
            raise AlgebraError("one degree per basis element")
        if any(d < 0 for d in degrees):
            raise AlgebraError("degrees must be non-negative")
        self.algebra = algebra
        self.degrees = tuple(degrees)
        if check:
            problem = self.failure()
            if problem:
                raise AlgebraError(problem)

    @property
    def top_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def pieces(self) -> list[Subspace]:
        n = self.algebra.dim
        out = []
        for d in range(self.top_degree + 1):
            cols = [{k: 1} for k in range(n) if self.degrees[k] == d]
            out.append(Subspace(n, SparseMatrix.from_columns(n, cols), check=False))
        return out

    def failure(self) -> str | None:
        a, deg = self.algebra, self.degrees
        for i, j in product(range(a.dim), repeat=2):
            for k in a.table[i][j]:
                if deg[k] != deg[i] + deg[j]:
                    return f"e{i} e{j} leaves degree {deg[i] + deg[j]}"
        for k in a.unit:
            if deg[k] != 0:
                return "unit is not in degree 0"
        return None

    @classmethod
    def from_pieces(cls, a: Algebra, pieces: Sequence[Subspace]) -> "GradedAlgebra":
        """Rebase ``a`` onto the union of the piece bases."""
        cols, degrees, labels = [], [], []
        for d, p in enumerate(pieces):
            for j in range(p.dim):
                cols.append(dict(p.basis.column(j)))
                degrees.append(d)
                labels.append(f"g{d}_{j}")
        basis = SparseMatrix.from_columns(a.dim, cols)
        if basis.cols != a.dim or rank(basis) != a.dim:
            raise AlgebraError("pieces do not form a direct-sum decomposition")
        return cls(a.rebased(basis, labels), degrees)


@dataclass
class FiltrationBasis:
    """A basis adapted to the powers of a nilpotent ideal.

    ``basis`` columns are vectors of the original algebra; ``valuation[k]`` is
    the largest ``n`` with column ``k`` in ``I^n``.
    """

    basis: SparseMatrix
    valuation: list[int]
    powers: list[Ideal]


def filtration_basis(a: Algebra, i: Ideal) -> FiltrationBasis:
    powers = [Ideal.whole(a)]
    cur = i
    for _ in range(a.dim + 1):
        powers.append(cur)
        if cur.dim == 0:
            break
        nxt = product_ideal(cur, i)
        if nxt.dim == cur.dim:
            raise AlgebraError("ideal is not nilpotent")
        cur = nxt
    else:
        raise AlgebraError("ideal is not nilpotent")
    from .exactla import Echelon, _to_int_vector

    cols, val = [], []
    for n in range(len(powers) - 1, -1, -1):
        p = powers[n]
        ech = Echelon(a.dim)
        for c in cols:
            ech.add(_to_int_vector(c))
        for j in range(p.dim):
            v = dict(p.basis.basis.column(j))
            if ech.add(_to_int_vector(v)):
                cols.append(v)
                val.append(n)
    # Lowest valuation first so that quotient letters come first.
    order = sorted(range(len(cols)), key=lambda k: val[k])
    cols = [cols[k] for k in order]
    val = [val[k] for k in order]
    return FiltrationBasis(SparseMatrix.from_columns(a.dim, cols), val, powers)


def associated_graded(a: Algebra, i: Ideal) -> GradedAlgebra:
    """``gr(A, I) = ⊕ I^j / I^(j+1)`` for a nilpotent ideal ``I``."""
    fb = filtration_basis(a, i)
    rebased = a.rebased(fb.basis)
    val = fb.valuation
    n = a.dim
    table = []
    for x in range(n):
        row = []
        for y in range(n):
            target = val[x] + val[y]
            row.append({k: v for k, v in rebased.table[x][y].items() if val[k] == target})
        table.append(row)
    unit = {k: v for k, v in rebased.unit.items() if val[k] == 0}
    labels = [f"[{lab}]" for lab in rebased.basis_labels]
    gr = Algebra(labels, table, unit, name=f"gr({a.name or 'A'})")
    return GradedAlgebra(gr, val)


# --------------------------------------------------------------------------
# split squares


@dataclass
class SplitSquare:
    """Fiber product ``A0 = A1 x_{A12} A2`` of split surjections.

    The corner basis is ``I(0) ⊕ I(1) ⊕ I(2)``: first the section images of
    the ``A12`` basis, then ``ker f1`` and ``ker f2``.  ``labels[k]`` names
    the summand (0, 1 or 2) of corner basis vector ``k``.
    """

    corner: Algebra
    a1: Algebra
    a2: Algebra
    a12: Algebra
    f1: AlgebraMap
    f2: AlgebraMap
    section1: SparseMatrix
    section2: SparseMatrix
    pr1: AlgebraMap
    pr2: AlgebraMap
    ideal1: Ideal
    ideal2: Ideal
    labels: list[int] = field(default_factory=list)

    @property
    def sections_multiplicative(self) -> bool:
        """Whether ``I(0)`` is a unital subalgebra (the sections are algebra maps)."""
        a = self.corner
        zero_part = [k for k, lab in enumerate(self.labels) if lab == 0]
        zs = set(zero_part)
        for x in zero_part:
            for y in zero_part:
                if any(k not in zs for k in a.table[x][y]):
                    return False
        return all(k in zs for k in a.unit)


def split_square(a1: Algebra, a2: Algebra, a12: Algebra, f1: AlgebraMap, f2: AlgebraMap,
                 section1: SparseMatrix, section2: SparseMatrix) -> SplitSquare:
    for name, f, src in (("f1", f1, a1), ("f2", f2, a2)):
        if f.src is not src or f.dst is not a12:
            raise AlgebraError(f"{name} has the wrong source or target")
        if not f.is_surjective():
            raise AlgebraError(f"{name} is not surjective")
    ident = SparseMatrix.identity(a12.dim)
    for name, f, s in (("section1", f1, section1), ("section2", f2, section2)):
        if s.shape != (f.src.dim, a12.dim) or f.matrix @ s != ident:
            raise AlgebraError(f"{name} is not a linear section of its map")
    k1 = decompose(f1.matrix).kernel
    k2 = decompose(f2.matrix).kernel
    n12, d1, d2 = a12.dim, k1.dim, k2.dim
    n = n12 + d1 + d2
    # embedding of corner basis into A1 ⊕ A2
    top, bottom = [], []
    for c in range(n12):
        top.append(dict(section1.column(c)))
        bottom.append(dict(section2.column(c)))
    for j in range(d1):
        top.append(dict(k1.basis.column(j)))
        bottom.append({})
    for j in range(d2):
        top.append({})
        bottom.append(dict(k2.basis.column(j)))
    emb1 = SparseMatrix.from_columns(a1.dim, top)
    emb2 = SparseMatrix.from_columns(a2.dim, bottom)

    k1_solve = SparseMatrix.hstack([k1.basis])
    k2_solve = SparseMatrix.hstack([k2.basis])

    def coords(x: Vector, y: Vector) -> Vector:
        c = f1(x)
        if c != f2(y):
            raise AlgebraError("pair does not lie in the fiber product")
        out = dict(c)
        rx = dict(x)
        _axpy(rx, Fraction(-1), section1.apply(c))
        ry = dict(y)
        _axpy(ry, Fraction(-1), section2.apply(c))
        if rx:
            sol = solve(k1_solve, SparseMatrix.from_columns(a1.dim, [rx]))
            for k, v in sol.column(0).items():
                out[n12 + k] = v
        if ry:
            sol = solve(k2_solve, SparseMatrix.from_columns(a2.dim, [ry]))
            for k, v in sol.column(0).items():
                out[n12 + d1 + k] = v
        return out

    table = []
    for i in range(n):
        row = []
        for j in range(n):
            x = a1.mul(emb1.column(i), emb1.column(j))
            y = a2.mul(emb2.column(i), emb2.column(j))
            row.append(coords(x, y))
        table.append(row)
    unit = coords(dict(a1.unit), dict(a2.unit))
    labels = [f"{a12.basis_labels[c]}~" for c in range(n12)]
    labels += [f"k1_{j}" for j in range(d1)] + [f"k2_{j}" for j in range(d2)]
    corner = Algebra(labels, table, unit, name=f"{a1.name or 'A1'} x_{a12.name or 'A12'} {a2.name or 'A2'}")
    report = validate_algebra(corner)
    if not report:
        raise AlgebraError(f"fiber product failed validation: {report.failure}")
    pr1 = AlgebraMap(corner, a1, emb1)
    pr2 = AlgebraMap(corner, a2, emb2)
    i1 = Ideal(corner, Subspace(n, SparseMatrix.from_columns(n, [{n12 + j: 1} for j in range(d1)]), check=False))
    i2 = Ideal(corner, Subspace(n, SparseMatrix.from_columns(n, [{n12 + d1 + j: 1} for j in range(d2)]), check=False))
    square = SplitSquare(corner, a1, a2, a12, f1, f2, section1, section2, pr1, pr2, i1, i2,
                         [0] * n12 + [1] * d1 + [2] * d2)
    # I(1) ∩ I(2) = 0 holds by construction; I(1) I(2) = 0 follows from it.
    for x in i1.vectors():
        for y in i2.vectors():
            if corner.mul(x, y) or corner.mul(y, x):
                raise AlgebraError("I(1) I(2) != 0")
    return square


__all__ = [
    "Algebra",
    "AlgebraError",
    "AlgebraMap",
    "AlgebraReport",
    "Bimodule",
    "FiltrationBasis",
    "GradedAlgebra",
    "Ideal",
    "SplitSquare",
    "associated_graded",
    "dual_numbers",
    "filtration_basis",
    "ideal_power",
    "product_algebra",
    "product_ideal",
    "quotient_by_ideal",
    "rationals",
    "split_square",
    "square_zero_extension",
    "truncated_polynomial",
    "upper_triangular",
    "validate_algebra",
    "LinAlgError",
]
