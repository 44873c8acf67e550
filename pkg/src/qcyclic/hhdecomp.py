"""Hochschild cyclic modules of algebras and their combinatorial decompositions.

Words ``e_{i_0} ⊗ .. ⊗ e_{i_q}`` are indexed lexicographically with ``i_0``
most significant, so index arithmetic replaces tuple manipulation in the hot
loops.  Every basis letter carries a label (a bimodule slot, a filtration
valuation or a degree); subobjects are picked out by predicates on the label
tuple of a word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .algcore import (
    Algebra,
    AlgebraError,
    AlgebraMap,
    Bimodule,
    GradedAlgebra,
    Ideal,
    SplitSquare,
    associated_graded,
    filtration_basis,
    quotient_by_ideal,
    square_zero_extension,
)
from .cyccat import (
    CyclicModule,
    CyclicMorphism,
    FreeCyclicModule,
    MorphismCheck,
    StructureError,
    StructureReport,
    Subquotient,
    check_morphism,
    free_counit_into,
    free_cyclic,
    subquotient,
)
from .exactla import SparseMatrix, decompose

ONE = Fraction(1)
DEFAULT_BUDGET = 2_000_000


class BudgetError(ValueError):
    pass


class HochschildModule(CyclicModule):
    """``[q] -> A^{⊗(q+1)}`` with multiplying faces, unit degeneracies and rotation."""

    def __init__(self, algebra: Algebra, max_degree: int, *, budget: int = DEFAULT_BUDGET,
                 letter_labels: Sequence | None = None):
        super().__init__(max_degree)
        n = algebra.dim
        if n == 0:
            raise AlgebraError("the zero algebra has no Hochschild module here")
        top = n ** (max_degree + 1)
        if top > budget:
            raise BudgetError(f"{top} words in degree {max_degree} exceed the budget {budget}; lower the max degree")
        self.algebra = algebra
        self.n = n
        self.letter_labels = tuple(letter_labels) if letter_labels is not None else (0,) * n
        if len(self.letter_labels) != n:
            raise AlgebraError("one label per basis letter")
        self._table = [[sorted(algebra.table[i][j].items()) for j in range(n)] for i in range(n)]
        self._unit = sorted(algebra.unit.items())
        self._words: dict[int, list[tuple[int, ...]]] = {}
        self._labels: dict[int, list[tuple]] = {}

    def dim(self, q):
        return self.n ** (q + 1)

    # words

    def words(self, q: int) -> list[tuple[int, ...]]:
        w = self._words.get(q)
        if w is None:
            w = self._words[q] = list(product(range(self.n), repeat=q + 1))
        return w

    def labels(self, q: int) -> list[tuple]:
        lab = self._labels.get(q)
        if lab is None:
            ll = self.letter_labels
            lab = self._labels[q] = [tuple(ll[x] for x in w) for w in self.words(q)]
        return lab

    def index(self, word: Sequence[int]) -> int:
        idx = 0
        for x in word:
            idx = idx * self.n + x
        return idx

    def word_name(self, q: int, idx: int) -> str:
        names = self.algebra.basis_labels
        return "⊗".join(names[x] for x in self.words(q)[idx])

    # structure maps

    def _build(self, q_src: int, q_dst: int, column) -> SparseMatrix:
        data = {}
        for idx in range(self.dim(q_src)):
            col = column(idx)
            if col:
                data[idx] = col
        return SparseMatrix._wrap(self.dim(q_dst), self.dim(q_src), data)

    @staticmethod
    def _acc(col: dict, key: int, val: Fraction) -> None:
        nv = col.get(key, 0) + val
        if nv:
            col[key] = nv
        else:
            col.pop(key, None)

    def _face_terms(self, q: int, i: int, idx: int):
        n = self.n
        if i < q:
            lo_w = n ** (q - i - 1)
            hi = idx // (lo_w * n * n)
            pair = (idx // lo_w) % (n * n)
            lo = idx % lo_w
            for k, c in self._table[pair // n][pair % n]:
                yield (hi * n + k) * lo_w + lo, c
        else:
            top = n ** q
            first, rest = divmod(idx, top)
            last = rest % n
            mid = rest // n
            for k, c in self._table[last][first]:
                yield k * (top // n) + mid, c

    def _face(self, q, i):
        def column(idx):
            col = {}
            for r, c in self._face_terms(q, i, idx):
                self._acc(col, r, c)
            return col
        return self._build(q, q - 1, column)

    def b(self, q):
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))

        def build():
            def column(idx):
                col = {}
                for i in range(q + 1):
                    sign = 1 if i % 2 == 0 else -1
                    for r, c in self._face_terms(q, i, idx):
                        self._acc(col, r, sign * c)
                return col
            return self._build(q, q - 1, column)
        return self._memo(("b", q), build)

    def bprime(self, q):
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))

        def build():
            def column(idx):
                col = {}
                for i in range(q):
                    sign = 1 if i % 2 == 0 else -1
                    for r, c in self._face_terms(q, i, idx):
                        self._acc(col, r, sign * c)
                return col
            return self._build(q, q - 1, column)
        return self._memo(("b'", q), build)

    def _degeneracy(self, q, i):
        n = self.n
        lo_w = n ** (q - i)

        def column(idx):
            hi, lo = divmod(idx, lo_w)
            return {(hi * n + u) * lo_w + lo: c for u, c in self._unit}
        return self._build(q, q + 1, column)

    def rotate(self, q: int, idx: int, j: int) -> int:
        """Index of ``t^j`` applied to word ``idx`` (``t`` moves the last letter to the front)."""
        j %= q + 1
        if j == 0:
            return idx
        w = self.n ** j
        return (idx % w) * (self.n ** (q + 1 - j)) + idx // w

    def _cyclic(self, q):
        return self._build(q, q, lambda idx: {self.rotate(q, idx, 1): ONE})

    def norm(self, q):
        def build():
            sgn = -1 if q % 2 else 1

            def column(idx):
                col = {}
                for i in range(q + 1):
                    self._acc(col, self.rotate(q, idx, i), Fraction(sgn ** i))
                return col
            return self._build(q, q, column)
        return self._memo(("N", q), build)

    def one_minus_lam(self, q):
        def build():
            sgn = -1 if q % 2 else 1

            def column(idx):
                col = {}
                self._acc(col, idx, ONE)
                self._acc(col, self.rotate(q, idx, 1), Fraction(-sgn))
                return col
            return self._build(q, q, column)
        return self._memo(("1-l", q), build)

    def extra_degeneracy(self, q):
        top = self.n ** (q + 1)
        return self._memo(("s-1", q), lambda: self._build(
            q, q + 1, lambda idx: {u * top + idx: c for u, c in self._unit}))


def hh(a: Algebra, max_degree: int, *, budget: int = DEFAULT_BUDGET, letter_labels=None) -> HochschildModule:
    return HochschildModule(a, max_degree, budget=budget, letter_labels=letter_labels)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    data = {}
    for ca, col_a in ((c, a.column(c)) for c in a.nonzero_columns()):
        for cb in b.nonzero_columns():
            col_b = b.column(cb)
            data[ca * b.cols + cb] = {ra * b.rows + rb: va * vb for ra, va in col_a.items() for rb, vb in col_b.items()}
    return SparseMatrix._wrap(a.rows * b.rows, a.cols * b.cols, data)


def hh_map(phi: AlgebraMap, src: HochschildModule, dst: HochschildModule, max_degree: int | None = None) -> CyclicMorphism:
    """Cyclic morphism ``φ^{⊗(q+1)}`` between Hochschild modules."""
    if src.algebra is not phi.src or dst.algebra is not phi.dst:
        raise AlgebraError("map does not match the modules' algebras")
    D = min(src.max_degree, dst.max_degree) if max_degree is None else max_degree
    maps = {0: phi.matrix}
    for q in range(1, D + 1):
        maps[q] = kron(maps[q - 1], phi.matrix)
    return CyclicMorphism(src, dst, maps, True)


# --------------------------------------------------------------------------
# partitions and gap sets


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"{p} is not a partition")

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def norm(self) -> int:
        k = self.k
        return sum(part * k ** (k - i) for i, part in enumerate(self.parts, start=1))

    def __str__(self) -> str:
        return "(" + "+".join(map(str, self.parts)) + ")" if self.parts else "()"


def _partitions(k: int, largest: int):
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def partitions(k: int) -> list[Partition]:
    """All partitions of ``k``, largest norm first."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = sorted((Partition(p) for p in _partitions(k, k)), key=lambda p: p.norm, reverse=True)
    norms = [p.norm for p in out]
    if len(set(norms)) != len(norms):
        raise AssertionError(f"norm does not separate the partitions of {k}")
    return out


def partition_of(values: Sequence[int]) -> Partition:
    return Partition(tuple(sorted((v for v in values if v), reverse=True)))


@dataclass(frozen=True)
class GapSet:
    f: tuple[int, ...]
    members: frozenset[int]

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)


def gap_set(f: Sequence[int]) -> GapSet:
    """Positions ``j`` with ``f(j) = 2`` whose nearest nonzero predecessor (cyclically) is a 1."""
    vals = tuple(int(v) for v in f)
    if any(v not in (0, 1, 2) for v in vals):
        raise ValueError("gap_set takes values in {0, 1, 2}")
    m = len(vals)
    members = set()
    for j, v in enumerate(vals):
        if v != 2:
            continue
        for step in range(1, m):
            u = vals[(j - step) % m]
            if u:
                if u == 1:
                    members.add(j)
                break
    return GapSet(vals, frozenset(members))


# --------------------------------------------------------------------------
# almost-free retractions


@dataclass
class Retract:
    """``H -> j_*G -> H`` where the composite should be ``scalar · id``."""

    piece: Subquotient
    base: Subquotient
    free: FreeCyclicModule
    to_free: MorphismCheck
    from_free: CyclicMorphism
    scalar: int
    composite: StructureReport

    @property
    def valid(self) -> bool:
        return self.to_free.valid and self.composite.valid and self.base_closed.valid

    base_closed: StructureReport = field(default_factory=lambda: StructureReport(True))


def build_retract(hh_mod: HochschildModule, piece: Subquotient, base: Subquotient,
                  positions: Callable[[tuple], Sequence[int]], scalar: int) -> Retract:
    """Certify ``a -> Σ_{j ∈ positions(a)} (t^j, t^{-j} a)`` and its composite with ``(t^s, g) -> t^s g``."""
    D = piece.max_degree
    jg = free_cyclic(base)
    maps = {}
    for q in range(D + 1):
        labels = hh_mod.labels(q)
        gpos = {w: p for p, w in enumerate(base.keep(q))}
        ng = base.dim(q)
        cols = []
        for idx in piece.keep(q):
            col = {}
            for j in positions(labels[idx]):
                tw = hh_mod.rotate(q, idx, -j)
                p = gpos.get(tw)
                if p is None:
                    raise StructureError(f"rotated word {hh_mod.word_name(q, tw)} is not in the base piece")
                key = j * ng + p
                col[key] = col.get(key, 0) + ONE
            cols.append(col)
        maps[q] = SparseMatrix.from_columns(jg.dim(q), cols)
    fwd = CyclicMorphism(piece, jg, maps, True)
    to_free = MorphismCheck(fwd, check_morphism(fwd))

    hpos_cache = {}

    def incl(q):
        hpos = hpos_cache.get(q)
        if hpos is None:
            hpos = hpos_cache[q] = {w: p for p, w in enumerate(piece.keep(q))}
        return SparseMatrix.from_columns(piece.dim(q), [{hpos[w]: ONE} for w in base.keep(q)])

    from_free = free_counit_into(base, piece, incl)
    composite = StructureReport(True)
    for q in range(D + 1):
        comp = from_free.maps[q] @ maps[q]
        target = SparseMatrix.scalar(piece.dim(q), scalar)
        if comp != target:
            diff = comp - target
            r, c, v = next(iter(diff.entries()))
            composite = StructureReport(False, f"composite is not {scalar}·id", q, (r, c, v))
            break
    base_closed = base.closure_failure()
    return Retract(piece, base, jg, to_free, from_free, scalar, composite, base_closed)


def _selector(hh_mod: HochschildModule, keep_pred, drop_pred=None):
    def sel(q):
        labels = hh_mod.labels(q)
        keep = [i for i, lab in enumerate(labels) if keep_pred(lab)]
        drop = [i for i, lab in enumerate(labels) if drop_pred(lab)] if drop_pred else []
        return keep, drop
    return sel


def dimension_audit(total: HochschildModule | CyclicModule, pieces: Sequence[Subquotient],
                    max_degree: int, ambient: Callable[[int], int] | None = None) -> StructureReport:
    """Pieces' degreewise dimensions must add up to the ambient dimension."""
    for q in range(max_degree + 1):
        amb = ambient(q) if ambient else total.dim(q)
        s = sum(p.dim(q) for p in pieces)
        if s != amb:
            return StructureReport(False, f"pieces sum to {s}, ambient is {amb}", q, (s, amb))
    return StructureReport(True)


# --------------------------------------------------------------------------
# weight pieces of square-zero extensions


@dataclass
class WeightPiece:
    k: int
    H: Subquotient
    G: Subquotient
    retract: Retract


@dataclass
class WeightDecomposition:
    algebra: Algebra
    module: HochschildModule
    pieces: list[WeightPiece]
    audit: StructureReport


def weight_decompose(b: Algebra, m: Bimodule, max_degree: int, *, budget: int = DEFAULT_BUDGET) -> WeightDecomposition:
    """Split ``hh(B ⋉ M)`` by the number ``k`` of letters from ``M``."""
    a, _ = square_zero_extension(b, m)
    labels = [0] * b.dim + [1] * m.dim
    mod = hh(a, max_degree, budget=budget, letter_labels=labels)
    pieces = []
    for k in range(max_degree + 2):
        H = subquotient(mod, _selector(mod, lambda lab, k=k: sum(lab) == k), name=f"H({k})")
        G = subquotient(mod, _selector(mod, lambda lab, k=k: sum(lab) == k and lab[0] == 1),
                        cyclic=False, check=False, name=f"G({k})")
        ret = build_retract(mod, H, G, lambda lab: [j for j, x in enumerate(lab) if x], k)
        pieces.append(WeightPiece(k, H, G, ret))
    audit = dimension_audit(mod, [p.H for p in pieces], max_degree)
    return WeightDecomposition(a, mod, pieces, audit)


# --------------------------------------------------------------------------
# partition pieces


@dataclass
class PartitionPiece:
    partition: Partition
    H: Subquotient
    G: Subquotient
    retract: Retract


def partition_decompose(a0: Algebra, bimods: Sequence[Bimodule], P: Partition, max_degree: int,
                        *, budget: int = DEFAULT_BUDGET) -> tuple[HochschildModule, PartitionPiece]:
    """``H(P)`` inside ``hh(A_0 ⋉ (A_1 ⊕ .. ⊕ A_l))``: words whose nonzero slot labels form ``P``.

    A part larger than ``l`` names no slot, so ``H(P)`` is then zero.
    """
    if P.k == 0:
        raise ValueError("partition must have positive size")
    a, _ = square_zero_extension(a0, Bimodule.direct_sum(list(bimods)))
    labels = [0] * a0.dim
    for slot, m in enumerate(bimods, start=1):
        labels += [slot] * m.dim
    mod = hh(a, max_degree, budget=budget, letter_labels=labels)
    target = P.parts
    H = subquotient(mod, _selector(mod, lambda lab: partition_of(lab).parts == target), name=f"H{P}")
    G = subquotient(mod, _selector(mod, lambda lab: lab[0] != 0 and partition_of(lab).parts == target),
                    cyclic=False, check=False, name=f"G{P}")
    ret = build_retract(mod, H, G, lambda lab: [j for j, x in enumerate(lab) if x], P.length)
    return mod, PartitionPiece(P, H, G, ret)


def partition_flow(mod: HochschildModule, k: int, max_degree: int) -> StructureReport:
    """Structure maps only move weight-``k`` words to partitions of equal or larger norm."""
    for q in range(max_degree + 1):
        labels = mod.labels(q)
        mats = []
        if q >= 1:
            mats += [(f"d_{i}", q - 1, mod.face(q, i)) for i in range(q + 1)]
        if q < max_degree:
            mats += [(f"s_{i}", q + 1, mod.degeneracy(q, i)) for i in range(q + 1)]
        mats.append(("t", q, mod.cyclic(q)))
        for name, qd, m in mats:
            dl = mod.labels(qd)
            for idx, lab in enumerate(labels):
                if sum(lab) != k:
                    continue
                src = partition_of(lab).norm
                for r in m.column(idx):
                    if sum(dl[r]) == k and partition_of(dl[r]).norm < src:
                        return StructureReport(False, f"{name} lowers the partition norm", q,
                                               (mod.word_name(q, idx), mod.word_name(qd, r)))
    return StructureReport(True)


@dataclass
class ChainStage:
    partition: Partition
    quotient: Subquotient  # X^k(i)
    kernel: Subquotient  # H(P_i)
    G: Subquotient
    retract: Retract
    exact: StructureReport  # dim X(i-1) = dim H(P_i) + dim X(i)


@dataclass
class PartitionChain:
    k: int
    module: HochschildModule
    top: Subquotient  # F^k / F^{k+1}
    stages: list[ChainStage]
    flow: StructureReport
    audit: StructureReport


def partition_chain(graded: GradedAlgebra, k: int, max_degree: int, *, budget: int = DEFAULT_BUDGET) -> PartitionChain:
    """Surjections ``F^k/F^{k+1} -> X(1) -> .. -> X(p(k)) = 0`` killing ``H(P_i)`` in norm order."""
    mod = hh(graded.algebra, max_degree, budget=budget, letter_labels=graded.degrees)
    parts = partitions(k)
    rank_of = {p.parts: i for i, p in enumerate(parts)}

    def pidx(lab):
        return rank_of[partition_of(lab).parts]

    top = subquotient(mod, _selector(mod, lambda lab: sum(lab) == k, lambda lab: sum(lab) > k),
                      name=f"F^{k}/F^{k + 1}")
    stages = []
    prev = top
    audit = StructureReport(True)
    for i, P in enumerate(parts):
        def in_weight(lab):
            return sum(lab) == k

        def dropped(lab, i=i):
            return sum(lab) > k or (sum(lab) == k and pidx(lab) < i)

        X = subquotient(mod, _selector(mod, lambda lab, i=i: in_weight(lab) and pidx(lab) > i,
                                       lambda lab, i=i: sum(lab) > k or (in_weight(lab) and pidx(lab) <= i)),
                        name=f"X^{k}({i + 1})")
        Hp = subquotient(mod, _selector(mod, lambda lab, i=i: in_weight(lab) and pidx(lab) == i, dropped),
                         name=f"H{P}")
        Gp = subquotient(mod, _selector(mod, lambda lab, i=i: in_weight(lab) and pidx(lab) == i and lab[0] != 0,
                                        dropped), cyclic=False, check=False, name=f"G{P}")
        ret = build_retract(mod, Hp, Gp, lambda lab: [j for j, x in enumerate(lab) if x], P.length)
        exact = dimension_audit(mod, [Hp, X], max_degree, ambient=prev.dim)
        if not exact and audit:
            audit = exact
        stages.append(ChainStage(P, X, Hp, Gp, ret, exact))
        prev = X
    if audit and any(prev.dim(q) for q in range(max_degree + 1)):
        audit = StructureReport(False, "last stage is not zero", None, None)
    flow = partition_flow(mod, k, max_degree)
    return PartitionChain(k, mod, top, stages, flow, audit)


# --------------------------------------------------------------------------
# ideal filtrations


@dataclass
class IdealFiltration:
    """``F^k`` spanned by words whose letter valuations sum to at least ``k``.

    The module is built on a basis adapted to the powers of ``I``; in that
    basis every ``F^k`` is a span of words.
    """

    algebra: Algebra  # original
    source_ideal: Ideal
    rebased: Algebra
    ideal: Ideal  # the same ideal in the adapted basis
    module: HochschildModule
    nilpotency: int  # least n with I^n = 0

    def submodule(self, k: int) -> Subquotient:
        return subquotient(self.module, _selector(self.module, lambda lab: sum(lab) >= k), name=f"F^{k}")

    def subquotient(self, k: int) -> Subquotient:
        return subquotient(self.module, _selector(self.module, lambda lab: sum(lab) == k, lambda lab: sum(lab) > k),
                           name=f"F^{k}/F^{k + 1}")

    def dim(self, k: int, q: int) -> int:
        return sum(1 for lab in self.module.labels(q) if sum(lab) >= k)

    def vanishing(self) -> StructureReport:
        """``F^k_q = 0`` for every ``k >= n(q+1)``, checked at ``k = n(q+1)`` (the largest span)."""
        n = self.nilpotency
        for q in range(self.module.max_degree + 1):
            k = n * (q + 1)
            d = self.dim(k, q)
            if d:
                return StructureReport(False, f"F^{k} is nonzero", q, (k, d))
        return StructureReport(True)

    def quotient_comparison(self, homology_degree: int | None = None) -> StructureReport:
        """``F^0/F^1`` equals ``hh(A/I)`` word by word, including every structure map."""
        quo, _ = quotient_by_ideal(self.rebased, _ideal_in_adapted(self.rebased, self.module.letter_labels))
        target = hh(quo, self.module.max_degree)
        sq = self.subquotient(0)
        return _compare_modules(sq, target, self.module.max_degree)


def _ideal_in_adapted(a: Algebra, valuation: Sequence[int]) -> Ideal:
    from .exactla import Subspace

    cols = [{i: ONE} for i, v in enumerate(valuation) if v >= 1]
    return Ideal(a, Subspace(a.dim, SparseMatrix.from_columns(a.dim, cols), check=False))


def _compare_modules(x: CyclicModule, y: CyclicModule, max_degree: int) -> StructureReport:
    for q in range(max_degree + 1):
        if x.dim(q) != y.dim(q):
            return StructureReport(False, "dimensions differ", q, (x.dim(q), y.dim(q)))
        if x.cyclic(q) != y.cyclic(q):
            return StructureReport(False, "t differs", q, None)
        if q >= 1:
            for i in range(q + 1):
                if x.face(q, i) != y.face(q, i):
                    return StructureReport(False, f"d_{i} differs", q, None)
        if q < max_degree:
            for i in range(q + 1):
                if x.degeneracy(q, i) != y.degeneracy(q, i):
                    return StructureReport(False, f"s_{i} differs", q, None)
    return StructureReport(True)


def ideal_filtration(a: Algebra, i: Ideal, max_degree: int, *, budget: int = DEFAULT_BUDGET) -> IdealFiltration:
    fb = filtration_basis(a, i)
    rebased = a.rebased(fb.basis, [f"v{v}_{j}" for j, v in enumerate(fb.valuation)], name=a.name)
    mod = hh(rebased, max_degree, budget=budget, letter_labels=fb.valuation)
    nil = len(fb.powers) - 1
    return IdealFiltration(a, i, rebased, _ideal_in_adapted(rebased, fb.valuation), mod, nil)


def graded_comparison(filt: IdealFiltration, k: int) -> StructureReport:
    """``F^k/F^{k+1}(A, I)`` against ``F^k/F^{k+1}(gr(A, I))`` as cyclic modules."""
    gr = associated_graded(filt.algebra, filt.source_ideal)
    mod_gr = hh(gr.algebra, filt.module.max_degree, letter_labels=gr.degrees)
    if tuple(gr.degrees) != tuple(filt.module.letter_labels):
        return StructureReport(False, "graded letters do not match the adapted basis", None, None)
    left = filt.subquotient(k)
    right = subquotient(mod_gr, _selector(mod_gr, lambda lab: sum(lab) == k, lambda lab: sum(lab) > k))
    return _compare_modules(left, right, filt.module.max_degree)


# --------------------------------------------------------------------------
# split squares


@dataclass
class IteratedFiber:
    square: SplitSquare
    module: HochschildModule
    fiber: Subquotient
    kernel_dims: list[int]
    label_dims: list[int]
    agreement: StructureReport
    pieces: dict[int, WeightPiece]
    audit: StructureReport


def split_square_ifib(s: SplitSquare, max_degree: int, *, budget: int = DEFAULT_BUDGET) -> IteratedFiber:
    """Iterated fiber of ``hh`` on a split square, split by ``|A_f|``."""
    if not s.sections_multiplicative:
        raise AlgebraError("splitting inconsistent with the maps: the section image I(0) is not a unital subalgebra")
    mod = hh(s.corner, max_degree, budget=budget, letter_labels=s.labels)

    def both(lab):
        return 1 in lab and 2 in lab

    fiber = subquotient(mod, _selector(mod, both), name="ifib")
    kernel_dims, label_dims = [], []
    agreement = StructureReport(True)
    p1, p2 = s.pr1.matrix, s.pr2.matrix
    t1, t2 = p1, p2
    for q in range(max_degree + 1):
        if q:
            t1, t2 = kron(t1, p1), kron(t2, p2)
        stacked = SparseMatrix.vstack([t1, t2])
        dec = decompose(stacked)
        kernel_dims.append(dec.kernel.dim)
        label_dims.append(fiber.dim(q))
        if agreement:
            if dec.kernel.dim != fiber.dim(q):
                agreement = StructureReport(False, "kernel and labelled sum differ in dimension", q,
                                            (dec.kernel.dim, fiber.dim(q)))
            else:
                for idx in fiber.keep(q):
                    if stacked.column(idx):
                        agreement = StructureReport(False, "labelled word not in the kernel", q,
                                                    (mod.word_name(q, idx),))
                        break
    pieces = {}
    for k in range(1, (max_degree + 1) // 2 + 1):
        H = subquotient(mod, _selector(mod, lambda lab, k=k: both(lab) and len(gap_set(lab)) == k), name=f"H({k})")
        G = subquotient(mod, _selector(mod, lambda lab, k=k: both(lab) and len(gap_set(lab)) == k
                                       and 0 in gap_set(lab).members), cyclic=False, check=False, name=f"G({k})")
        ret = build_retract(mod, H, G, lambda lab: sorted(gap_set(lab).members), k)
        pieces[k] = WeightPiece(k, H, G, ret)
    audit = dimension_audit(mod, list(p.H for p in pieces.values()), max_degree, ambient=fiber.dim)
    return IteratedFiber(s, mod, fiber, kernel_dims, label_dims, agreement, pieces, audit)


__all__ = [
    "BudgetError",
    "ChainStage",
    "DEFAULT_BUDGET",
    "GapSet",
    "HochschildModule",
    "IdealFiltration",
    "IteratedFiber",
    "Partition",
    "PartitionChain",
    "PartitionPiece",
    "Retract",
    "WeightDecomposition",
    "WeightPiece",
    "build_retract",
    "dimension_audit",
    "gap_set",
    "graded_comparison",
    "hh",
    "hh_map",
    "ideal_filtration",
    "kron",
    "partition_chain",
    "partition_decompose",
    "partition_flow",
    "partition_of",
    "partitions",
    "split_square_ifib",
    "weight_decompose",
]
