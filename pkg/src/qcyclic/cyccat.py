"""Truncated simplicial and cyclic modules, free cyclic objects, and Λ normal forms.

A module of max degree ``D`` carries spaces ``M_0 .. M_D``.  Faces
``d_i: M_q -> M_{q-1}``, degeneracies ``s_i: M_q -> M_{q+1}`` (only for
``q < D``) and cyclic operators ``t_q: M_q -> M_q`` are exact sparse matrices.
Structure maps are produced lazily and memoized per instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .exactla import LinAlgError, SparseMatrix

ONE = Fraction(1)


class StructureError(LinAlgError):
    pass


@dataclass
class StructureReport:
    """Outcome of an identity check; ``witness`` pins down the first failure."""

    valid: bool
    failure: str | None = None
    degree: int | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.valid


def _sum(mats: Iterable[tuple[int, SparseMatrix]], rows: int, cols: int) -> SparseMatrix:
    data: dict[int, dict[int, Fraction]] = {}
    for sign, m in mats:
        for r, c, v in m.entries():
            col = data.setdefault(c, {})
            nv = col.get(r, 0) + sign * v
            if nv:
                col[r] = nv
            else:
                del col[r]
    return SparseMatrix(rows, cols, {c: col for c, col in data.items() if col})


class SimplicialModule:
    """Base class; subclasses implement ``dim``, ``_face`` and ``_degeneracy``."""

    max_degree: int

    def __init__(self, max_degree: int):
        if max_degree < 0:
            raise StructureError("max degree must be non-negative")
        self.max_degree = max_degree
        self._cache: dict = {}

    # interface

    def dim(self, q: int) -> int:
        raise NotImplementedError

    def _face(self, q: int, i: int) -> SparseMatrix:
        raise NotImplementedError

    def _degeneracy(self, q: int, i: int) -> SparseMatrix:
        raise NotImplementedError

    # memoized accessors

    def _memo(self, key, build):
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = build()
            return val

    @property
    def dims(self) -> list[int]:
        return [self.dim(q) for q in range(self.max_degree + 1)]

    def _check_degree(self, q: int) -> None:
        if not 0 <= q <= self.max_degree:
            raise StructureError(f"degree {q} outside 0..{self.max_degree}")

    def face(self, q: int, i: int) -> SparseMatrix:
        self._check_degree(q)
        if q < 1 or not 0 <= i <= q:
            raise StructureError(f"no face d_{i} on degree {q}")
        return self._memo(("d", q, i), lambda: self._face(q, i))

    def degeneracy(self, q: int, i: int) -> SparseMatrix:
        self._check_degree(q)
        if q >= self.max_degree or not 0 <= i <= q:
            raise StructureError(f"no degeneracy s_{i} on degree {q} (max degree {self.max_degree})")
        return self._memo(("s", q, i), lambda: self._degeneracy(q, i))

    def b(self, q: int) -> SparseMatrix:
        """Alternating sum of all faces ``M_q -> M_{q-1}`` (zero map out of degree 0)."""
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))
        return self._memo(("b", q), lambda: _sum(
            (((-1) ** i, self.face(q, i)) for i in range(q + 1)), self.dim(q - 1), self.dim(q)))

    def bprime(self, q: int) -> SparseMatrix:
        """Alternating sum of the faces ``d_0 .. d_{q-1}``."""
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))
        return self._memo(("b'", q), lambda: _sum(
            (((-1) ** i, self.face(q, i)) for i in range(q)), self.dim(q - 1), self.dim(q)))

    def restrict(self, max_degree: int) -> "SimplicialModule":
        return _Truncation(self, max_degree)


class CyclicModule(SimplicialModule):
    """Simplicial module with cyclic operators; subclasses add ``_cyclic``."""

    def _cyclic(self, q: int) -> SparseMatrix:
        raise NotImplementedError

    def cyclic(self, q: int) -> SparseMatrix:
        self._check_degree(q)
        return self._memo(("t", q), lambda: self._cyclic(q))

    def lam(self, q: int) -> SparseMatrix:
        """``λ = (-1)^q t`` on ``M_q``."""
        t = self.cyclic(q)
        return t if q % 2 == 0 else -t

    def one_minus_lam(self, q: int) -> SparseMatrix:
        return self._memo(("1-l", q), lambda: SparseMatrix.identity(self.dim(q)) - self.lam(q))

    def norm(self, q: int) -> SparseMatrix:
        """``N = 1 + λ + .. + λ^q`` on ``M_q``."""
        def build():
            lam = self.lam(q)
            acc = SparseMatrix.identity(self.dim(q))
            power = acc
            for _ in range(q):
                power = lam @ power
                acc = acc + power
            return acc
        return self._memo(("N", q), build)

    def extra_degeneracy(self, q: int) -> SparseMatrix:
        """``t_{q+1} s_q: M_q -> M_{q+1}``, a contraction for ``b'``."""
        return self._memo(("s-1", q), lambda: self.cyclic(q + 1) @ self.degeneracy(q, q))

    def restrict(self, max_degree: int) -> "CyclicModule":
        return _CyclicTruncation(self, max_degree)


# --------------------------------------------------------------------------
# explicit modules


class MatrixSimplicialModule(SimplicialModule):
    def __init__(self, dims: Sequence[int], faces: Mapping[tuple[int, int], SparseMatrix],
                 degeneracies: Mapping[tuple[int, int], SparseMatrix]):
        super().__init__(len(dims) - 1)
        self._dims = list(dims)
        self._faces = dict(faces)
        self._degens = dict(degeneracies)
        for (q, i), m in self._faces.items():
            if m.shape != (self._dims[q - 1], self._dims[q]):
                raise StructureError(f"d_{i} on degree {q} has shape {m.shape}")
        for (q, i), m in self._degens.items():
            if m.shape != (self._dims[q + 1], self._dims[q]):
                raise StructureError(f"s_{i} on degree {q} has shape {m.shape}")

    def dim(self, q):
        return self._dims[q]

    def _face(self, q, i):
        return self._faces[(q, i)]

    def _degeneracy(self, q, i):
        return self._degens[(q, i)]


class MatrixCyclicModule(CyclicModule):
    def __init__(self, dims: Sequence[int], faces, degeneracies, cyclic: Mapping[int, SparseMatrix]):
        super().__init__(len(dims) - 1)
        base = MatrixSimplicialModule(dims, faces, degeneracies)
        self._base = base
        self._cyc = dict(cyclic)
        for q, m in self._cyc.items():
            if m.shape != (base.dim(q), base.dim(q)):
                raise StructureError(f"t on degree {q} has shape {m.shape}")

    def dim(self, q):
        return self._base.dim(q)

    def _face(self, q, i):
        return self._base._face(q, i)

    def _degeneracy(self, q, i):
        return self._base._degeneracy(q, i)

    def _cyclic(self, q):
        return self._cyc[q]


def constant_module(max_degree: int, dim: int = 1) -> MatrixCyclicModule:
    """Every space ``Q^dim`` and every structure map the identity."""
    ident = SparseMatrix.identity(dim)
    D = max_degree
    faces = {(q, i): ident for q in range(1, D + 1) for i in range(q + 1)}
    degens = {(q, i): ident for q in range(D) for i in range(q + 1)}
    return MatrixCyclicModule([dim] * (D + 1), faces, degens, {q: ident for q in range(D + 1)})


def zero_module(max_degree: int) -> MatrixCyclicModule:
    return constant_module(max_degree, 0)


def materialize(m: SimplicialModule) -> SimplicialModule:
    """Copy all structure maps of ``m`` into an explicit module."""
    D = m.max_degree
    faces = {(q, i): m.face(q, i) for q in range(1, D + 1) for i in range(q + 1)}
    degens = {(q, i): m.degeneracy(q, i) for q in range(D) for i in range(q + 1)}
    if isinstance(m, CyclicModule):
        return MatrixCyclicModule(m.dims, faces, degens, {q: m.cyclic(q) for q in range(D + 1)})
    return MatrixSimplicialModule(m.dims, faces, degens)


def _surjections(q: int, p: int) -> list[tuple[int, ...]]:
    """Monotone surjections ``[q] -> [p]`` as value tuples, in a fixed order."""
    out = []
    for jumps in combinations(range(1, q + 1), p):
        vals, v, js = [], 0, set(jumps)
        for j in range(q + 1):
            if j in js:
                v += 1
            vals.append(v)
        out.append(tuple(vals))
    return out


def dold_kan(normalized: Sequence[int], boundary: Mapping[int, SparseMatrix], max_degree: int) -> MatrixSimplicialModule:
    """Simplicial module ``Γ(N)`` from a chain complex ``N`` with ``boundary[p]: N_p -> N_{p-1}``.

    ``Γ(N)_q`` is the sum of ``N_p`` over surjections ``σ: [q] -> [p]``.  A
    structure map ``θ`` sends ``(σ, x)`` to ``(σ', ε^* x)`` where ``σθ = ε σ'``
    is the epi-mono factorization; ``ε^*`` is the identity when ``ε = id``,
    ``∂`` when ``ε`` is the zeroth coface, and zero otherwise.
    """
    D = max_degree
    ndim = list(normalized) + [0] * max(0, D + 1 - len(normalized))
    for p, m in boundary.items():
        if m.shape != (ndim[p - 1], ndim[p]):
            raise StructureError(f"boundary out of N_{p} has shape {m.shape}")
    offsets, dims = {}, []
    for q in range(D + 1):
        off, table = 0, {}
        for p in range(q + 1):
            if ndim[p] == 0:
                continue
            for sigma in _surjections(q, p):
                table[sigma] = off
                off += ndim[p]
        offsets[q] = table
        dims.append(off)

    def build(q_src: int, q_dst: int, compose) -> SparseMatrix:
        data = {}
        for sigma, o in offsets[q_src].items():
            p = sigma[-1]
            vals = compose(sigma)
            image = sorted(set(vals))
            if len(image) == p + 1:
                op, sigma2 = None, vals
            elif image == list(range(1, p + 1)):
                op, sigma2 = boundary.get(p), tuple(v - 1 for v in vals)
                if op is None or ndim[p - 1] == 0:
                    continue
            else:
                continue
            ro = offsets[q_dst][sigma2]
            if op is None:
                for k in range(ndim[p]):
                    data[o + k] = {ro + k: ONE}
            else:
                for k in op.nonzero_columns():
                    data[o + k] = {ro + r: v for r, v in op.column(k).items()}
        return SparseMatrix._wrap(dims[q_dst], dims[q_src], data)

    faces = {(q, i): build(q, q - 1, lambda s, i=i: s[:i] + s[i + 1:])
             for q in range(1, D + 1) for i in range(q + 1)}
    degens = {(q, i): build(q, q + 1, lambda s, i=i: s[:i + 1] + s[i:])
              for q in range(D) for i in range(q + 1)}
    return MatrixSimplicialModule(dims, faces, degens)


def rebase_module(m: SimplicialModule, changes: Mapping[int, SparseMatrix]) -> SimplicialModule:
    """Transport ``m`` along invertible matrices ``changes[q]`` on each ``M_q`` (identity where absent)."""
    from .exactla import solve

    D = m.max_degree
    g = {q: changes.get(q, SparseMatrix.identity(m.dim(q))) for q in range(D + 1)}
    ginv = {q: solve(g[q], SparseMatrix.identity(m.dim(q))) for q in range(D + 1)}
    faces = {(q, i): g[q - 1] @ m.face(q, i) @ ginv[q] for q in range(1, D + 1) for i in range(q + 1)}
    degens = {(q, i): g[q + 1] @ m.degeneracy(q, i) @ ginv[q] for q in range(D) for i in range(q + 1)}
    if isinstance(m, CyclicModule):
        return MatrixCyclicModule(m.dims, faces, degens, {q: g[q] @ m.cyclic(q) @ ginv[q] for q in range(D + 1)})
    return MatrixSimplicialModule(m.dims, faces, degens)


def random_invertible(rng, n: int, spread: int = 2) -> SparseMatrix:
    """``L U`` with unit triangular factors and small integer entries, so always invertible."""
    lower = {j: {j: ONE, **{i: Fraction(rng.randint(-spread, spread)) for i in range(j + 1, n)}} for j in range(n)}
    upper = {j: {j: ONE, **{i: Fraction(rng.randint(-spread, spread)) for i in range(j)}} for j in range(n)}
    return SparseMatrix(n, n, lower) @ SparseMatrix(n, n, upper)


def random_simplicial_module(rng, max_degree: int, dim_cap: int = 2, extend_to: int | None = None):
    """Random ``Γ(N)`` with every ``dim Γ(N)_q <= dim_cap`` for ``q <= max_degree``, in scrambled bases.

    ``N`` is drawn degree by degree among dims that keep the cap (and is
    redrawn if it comes out zero); ``dim
    Γ(N)_q = Σ_p C(q, p) dim N_p``.  With ``extend_to`` the same ``N`` is
    continued up to that degree in the standard Dold-Kan basis (the
    extension is not capped); restricting it to ``max_degree`` gives back the
    capped module.  Returns ``(module, normalized dims)``.
    """
    D = max_degree
    top = D if extend_to is None else max(D, extend_to)
    ndim = [0] * (D + 1)
    while not any(ndim):  # the zero module would make every check vacuous
        for p in range(D + 1):
            cap = min((dim_cap - sum(comb(q, j) * ndim[j] for j in range(p))) // comb(q, p) for q in range(p, D + 1))
            ndim[p] = rng.randint(0, max(cap, 0))
    boundary = {}
    for p in range(1, D + 1):
        if ndim[p] and ndim[p - 1]:
            # keep ∂∂ = 0 by using a random map only where the previous boundary vanishes
            prev = boundary.get(p - 1)
            if prev is None or prev.is_zero():
                boundary[p] = SparseMatrix(ndim[p - 1], ndim[p], {
                    j: {i: Fraction(rng.randint(-2, 2)) for i in range(ndim[p - 1])} for j in range(ndim[p])})
    base = dold_kan(ndim, boundary, top)
    changes = {q: random_invertible(rng, base.dim(q)) for q in range(D + 1)}
    return rebase_module(base, changes), ndim


class _Truncation(SimplicialModule):
    def __init__(self, parent: SimplicialModule, max_degree: int):
        if max_degree > parent.max_degree:
            raise StructureError("cannot extend a truncated module")
        super().__init__(max_degree)
        self.parent = parent

    def dim(self, q):
        return self.parent.dim(q)

    def _face(self, q, i):
        return self.parent.face(q, i)

    def _degeneracy(self, q, i):
        return self.parent.degeneracy(q, i)

    def b(self, q):
        return self.parent.b(q)

    def bprime(self, q):
        return self.parent.bprime(q)


class _CyclicTruncation(_Truncation, CyclicModule):
    def _cyclic(self, q):
        return self.parent.cyclic(q)

    def norm(self, q):
        return self.parent.norm(q)

    def one_minus_lam(self, q):
        return self.parent.one_minus_lam(q)


# --------------------------------------------------------------------------
# validation


def _first_diff(lhs: SparseMatrix, rhs: SparseMatrix) -> tuple | None:
    if lhs.shape != rhs.shape:
        return ("shape", lhs.shape, rhs.shape)
    diff = lhs - rhs
    for r, c, v in diff.entries():
        return (r, c, v)
    return None


def _power(m: SparseMatrix, k: int) -> SparseMatrix:
    out = SparseMatrix.identity(m.rows)
    for _ in range(k):
        out = m @ out
    return out


def validate_simplicial(m: SimplicialModule, max_degree: int | None = None) -> StructureReport:
    """Check every simplicial identity whose terms live in degrees ``<= max_degree``."""
    D = m.max_degree if max_degree is None else min(max_degree, m.max_degree)
    for q in range(D + 1):
        # d_i d_j = d_{j-1} d_i for i < j, on M_q
        if q >= 2:
            for j in range(q + 1):
                for i in range(j):
                    w = _first_diff(m.face(q - 1, i) @ m.face(q, j), m.face(q - 1, j - 1) @ m.face(q, i))
                    if w:
                        return StructureReport(False, f"d_{i} d_{j} != d_{j - 1} d_{i}", q, w)
        if q < D:
            # d_i s_j relations on M_q
            for j in range(q + 1):
                s = m.degeneracy(q, j)
                ident = SparseMatrix.identity(m.dim(q))
                for i in range(q + 2):
                    lhs = m.face(q + 1, i) @ s
                    if i < j:
                        rhs = m.degeneracy(q - 1, j - 1) @ m.face(q, i)
                        name = f"d_{i} s_{j} != s_{j - 1} d_{i}"
                    elif i in (j, j + 1):
                        rhs = ident
                        name = f"d_{i} s_{j} != id"
                    else:
                        rhs = m.degeneracy(q - 1, j) @ m.face(q, i - 1)
                        name = f"d_{i} s_{j} != s_{j} d_{i - 1}"
                    w = _first_diff(lhs, rhs)
                    if w:
                        return StructureReport(False, name, q, w)
        if q + 2 <= D:
            for j in range(q + 1):
                for i in range(j + 1):
                    w = _first_diff(m.degeneracy(q + 1, i) @ m.degeneracy(q, j),
                                    m.degeneracy(q + 1, j + 1) @ m.degeneracy(q, i))
                    if w:
                        return StructureReport(False, f"s_{i} s_{j} != s_{j + 1} s_{i}", q, w)
    return StructureReport(True)


def validate_cyclic(m: CyclicModule, max_degree: int | None = None) -> StructureReport:
    """Check the simplicial identities plus the cyclic ones, exactly."""
    D = m.max_degree if max_degree is None else min(max_degree, m.max_degree)
    rep = validate_simplicial(m, D)
    if not rep:
        return rep
    for q in range(D + 1):
        t = m.cyclic(q)
        if t.shape != (m.dim(q), m.dim(q)):
            return StructureReport(False, "t has the wrong shape", q, (t.shape,))
        w = _first_diff(_power(t, q + 1), SparseMatrix.identity(m.dim(q)))
        if w:
            return StructureReport(False, f"t^{q + 1} != id", q, w)
        if q >= 1:
            tl = m.cyclic(q - 1)
            w = _first_diff(m.face(q, 0) @ t, m.face(q, q))
            if w:
                return StructureReport(False, "d_0 t != d_q", q, w)
            for i in range(1, q + 1):
                w = _first_diff(m.face(q, i) @ t, tl @ m.face(q, i - 1))
                if w:
                    return StructureReport(False, f"d_{i} t != t d_{i - 1}", q, w)
        if q < D:
            tu = m.cyclic(q + 1)
            w = _first_diff(m.degeneracy(q, 0) @ t, tu @ tu @ m.degeneracy(q, q))
            if w:
                return StructureReport(False, "s_0 t != t^2 s_q", q, w)
            for i in range(1, q + 1):
                w = _first_diff(m.degeneracy(q, i) @ t, tu @ m.degeneracy(q, i - 1))
                if w:
                    return StructureReport(False, f"s_{i} t != t s_{i - 1}", q, w)
    return StructureReport(True)


# --------------------------------------------------------------------------
# sub and quotient modules selected by basis indices


class Subquotient(SimplicialModule):
    """``(keep ⊕ drop) / drop`` inside ``parent`` where both are spans of basis vectors.

    ``selector(q)`` returns ``(keep, drop)`` index collections for degree
    ``q``.  With ``drop`` empty this is a submodule; with ``keep ∪ drop``
    everything it is a quotient.  Structure maps are the parent's with rows
    restricted to ``keep``; :meth:`closure_failure` certifies that this is
    legitimate.
    """

    def __init__(self, parent: SimplicialModule, selector: Callable[[int], tuple[Sequence[int], Iterable[int]]],
                 max_degree: int | None = None, name: str = ""):
        D = parent.max_degree if max_degree is None else max_degree
        super().__init__(D)
        self.parent = parent
        self._selector = selector
        self._sel: dict[int, tuple[list[int], frozenset[int]]] = {}
        self.name = name

    def selection(self, q: int) -> tuple[list[int], frozenset[int]]:
        s = self._sel.get(q)
        if s is None:
            keep, drop = self._selector(q)
            s = self._sel[q] = (sorted(keep), frozenset(drop))
        return s

    def keep(self, q: int) -> list[int]:
        return self.selection(q)[0]

    def dim(self, q):
        return len(self.keep(q))

    def _restrict(self, m: SparseMatrix, src: int, dst: int) -> SparseMatrix:
        return m.select(rows=self.keep(dst), cols=self.keep(src))

    def _face(self, q, i):
        return self._restrict(self.parent.face(q, i), q, q - 1)

    def _degeneracy(self, q, i):
        return self._restrict(self.parent.degeneracy(q, i), q, q + 1)

    def b(self, q):
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))
        return self._memo(("b", q), lambda: self._restrict(self.parent.b(q), q, q - 1))

    def bprime(self, q):
        if q == 0:
            return SparseMatrix.zeros(0, self.dim(0))
        return self._memo(("b'", q), lambda: self._restrict(self.parent.bprime(q), q, q - 1))

    def inclusion(self, q: int) -> SparseMatrix:
        """Basis inclusion ``keep -> parent`` in degree ``q``."""
        keep = self.keep(q)
        return SparseMatrix.from_columns(self.parent.dim(q), [{k: ONE} for k in keep])

    def projection(self, q: int) -> SparseMatrix:
        """Coordinate projection ``parent -> keep`` (a chain map when this is a quotient)."""
        keep = self.keep(q)
        return SparseMatrix.identity(self.parent.dim(q)).select(rows=keep)

    def _maps(self):
        D = self.max_degree
        for q in range(D + 1):
            if q >= 1:
                for i in range(q + 1):
                    yield f"d_{i}", q, q - 1, self.parent.face(q, i)
            if q < D:
                for i in range(q + 1):
                    yield f"s_{i}", q, q + 1, self.parent.degeneracy(q, i)

    def closure_failure(self) -> StructureReport:
        """Check ``drop`` and ``keep ∪ drop`` are preserved by every structure map."""
        for name, src, dst, m in self._maps():
            keep_s, drop_s = self.selection(src)
            keep_d, drop_d = self.selection(dst)
            allowed = set(keep_d) | drop_d
            for c in keep_s:
                for r in m.column(c):
                    if r not in allowed:
                        return StructureReport(False, f"{name} leaves keep+drop", src, (c, r))
            for c in drop_s:
                for r in m.column(c):
                    if r not in drop_d:
                        return StructureReport(False, f"{name} moves a dropped vector into kept ones", src, (c, r))
        return StructureReport(True)


class CyclicSubquotient(Subquotient, CyclicModule):
    def _cyclic(self, q):
        return self._restrict(self.parent.cyclic(q), q, q)

    def norm(self, q):
        return self._memo(("N", q), lambda: self._restrict(self.parent.norm(q), q, q))

    def one_minus_lam(self, q):
        return self._memo(("1-l", q), lambda: self._restrict(self.parent.one_minus_lam(q), q, q))

    def _maps(self):
        yield from super()._maps()
        for q in range(self.max_degree + 1):
            yield "t", q, q, self.parent.cyclic(q)


def subquotient(parent: SimplicialModule, selector, *, cyclic: bool | None = None, check: bool = True,
                name: str = "") -> Subquotient:
    if cyclic is None:
        cyclic = isinstance(parent, CyclicModule)
    cls = CyclicSubquotient if cyclic else Subquotient
    sq = cls(parent, selector, name=name)
    if check:
        rep = sq.closure_failure()
        if not rep:
            raise StructureError(f"{name or 'selection'} is not a subquotient: {rep.failure} in degree {rep.degree}")
    return sq


# --------------------------------------------------------------------------
# free cyclic objects


class FreeCyclicModule(CyclicModule):
    """``j_*X``: degree ``q`` is ``q+1`` copies of ``X_q`` indexed by ``t^s``.

    Basis index of ``(t^s, a)`` is ``s * dim X_q + a``.
    """

    def __init__(self, base: SimplicialModule):
        super().__init__(base.max_degree)
        self.base = base

    def dim(self, q):
        return (q + 1) * self.base.dim(q)

    def _assemble(self, q_src: int, q_dst: int, pieces) -> SparseMatrix:
        n_src, n_dst = self.base.dim(q_src), self.base.dim(q_dst)
        data: dict[int, dict[int, Fraction]] = {}
        for s, s_new, mat in pieces:
            for r, c, v in mat.entries():
                data.setdefault(s * n_src + c, {})[s_new * n_dst + r] = v
        return SparseMatrix((q_dst + 1) * n_dst, (q_src + 1) * n_src, data)

    def _face(self, q, r):
        def pieces():
            for s in range(q + 1):
                if s <= r:
                    yield s, s % q, self.base.face(q, r - s)
                else:
                    yield s, s - 1, self.base.face(q, q + 1 + r - s)
        return self._assemble(q, q - 1, pieces())

    def _degeneracy(self, q, r):
        def pieces():
            for s in range(q + 1):
                if s <= r:
                    yield s, s, self.base.degeneracy(q, r - s)
                else:
                    yield s, s + 1, self.base.degeneracy(q, q + 1 + r - s)
        return self._assemble(q, q + 1, pieces())

    def _cyclic(self, q):
        ident = SparseMatrix.identity(self.base.dim(q))
        return self._assemble(q, q, ((s, (s + 1) % (q + 1), ident) for s in range(q + 1)))


def free_cyclic(x: SimplicialModule) -> FreeCyclicModule:
    return FreeCyclicModule(x)


# --------------------------------------------------------------------------
# morphisms


@dataclass
class CyclicMorphism:
    """Degreewise matrices ``src_q -> dst_q`` for ``q <= max_degree``."""

    src: SimplicialModule
    dst: SimplicialModule
    maps: dict[int, SparseMatrix]
    cyclic: bool = True

    @property
    def max_degree(self) -> int:
        return min(self.src.max_degree, self.dst.max_degree)

    def __getitem__(self, q: int) -> SparseMatrix:
        return self.maps[q]

    def __matmul__(self, other: "CyclicMorphism") -> "CyclicMorphism":
        D = min(self.max_degree, other.max_degree)
        return CyclicMorphism(other.src, self.dst, {q: self.maps[q] @ other.maps[q] for q in range(D + 1)},
                              self.cyclic and other.cyclic)


def check_morphism(f: CyclicMorphism, max_degree: int | None = None) -> StructureReport:
    """Certify that ``f`` commutes with faces, degeneracies and (if cyclic) ``t``."""
    src, dst = f.src, f.dst
    D = f.max_degree if max_degree is None else min(max_degree, f.max_degree)
    for q in range(D + 1):
        m = f.maps.get(q)
        if m is None or m.shape != (dst.dim(q), src.dim(q)):
            return StructureReport(False, "missing or misshapen component", q, (None if m is None else m.shape,))
    for q in range(D + 1):
        fq = f.maps[q]
        if q >= 1:
            for i in range(q + 1):
                w = _first_diff(dst.face(q, i) @ fq, f.maps[q - 1] @ src.face(q, i))
                if w:
                    return StructureReport(False, f"square for d_{i} does not commute", q, w)
        if q < D:
            for i in range(q + 1):
                w = _first_diff(dst.degeneracy(q, i) @ fq, f.maps[q + 1] @ src.degeneracy(q, i))
                if w:
                    return StructureReport(False, f"square for s_{i} does not commute", q, w)
        if f.cyclic:
            w = _first_diff(dst.cyclic(q) @ fq, fq @ src.cyclic(q))
            if w:
                return StructureReport(False, "square for t does not commute", q, w)
    return StructureReport(True)


@dataclass
class MorphismCheck:
    morphism: CyclicMorphism
    report: StructureReport

    @property
    def valid(self) -> bool:
        return self.report.valid


def morphism_map(maps: Mapping[int, SparseMatrix], src: SimplicialModule, dst: SimplicialModule,
                 *, cyclic: bool | None = None) -> MorphismCheck:
    if cyclic is None:
        cyclic = isinstance(src, CyclicModule) and isinstance(dst, CyclicModule)
    f = CyclicMorphism(src, dst, dict(maps), cyclic)
    return MorphismCheck(f, check_morphism(f))


def counit(y: CyclicModule) -> CyclicMorphism:
    """``j_*(y) -> y`` sending ``(t^s, a)`` to ``t^s a``."""
    jy = free_cyclic(y)
    maps = {}
    for q in range(y.max_degree + 1):
        t = y.cyclic(q)
        blocks = [SparseMatrix.identity(y.dim(q))]
        for _ in range(q):
            blocks.append(t @ blocks[-1])
        maps[q] = SparseMatrix.hstack(blocks, rows=y.dim(q))
    return CyclicMorphism(jy, y, maps, True)


def free_counit_into(g: Subquotient, h: CyclicModule, incl: Callable[[int], SparseMatrix]) -> CyclicMorphism:
    """``j_*G -> H``, ``(t^s, a) -> t^s ι(a)`` for a simplicial map ``ι: G -> H``."""
    jg = free_cyclic(g)
    maps = {}
    for q in range(g.max_degree + 1):
        t = h.cyclic(q)
        blocks = [incl(q)]
        for _ in range(q):
            blocks.append(t @ blocks[-1])
        maps[q] = SparseMatrix.hstack(blocks, rows=h.dim(q))
    return CyclicMorphism(jg, h, maps, True)


# --------------------------------------------------------------------------
# the cyclic category


def _mono(n: int, i: int) -> tuple[int, ...]:
    """``δ_i: [n-1] -> [n]`` skipping ``i``."""
    return tuple(x if x < i else x + 1 for x in range(n))


def _epi(n: int, i: int) -> tuple[int, ...]:
    """``σ_i: [n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(x if x <= i else x - 1 for x in range(n + 2))


@dataclass(frozen=True)
class LambdaMorphism:
    """Operator ``M_source -> M_target`` written ``t^power ∘ θ^*``.

    ``theta`` is a monotone map ``[target] -> [source]`` (a morphism of Δ);
    its induced operator is the simplicial part.
    """

    source: int
    target: int
    theta: tuple[int, ...]
    power: int

    def simplicial_word(self) -> list[tuple[str, int]]:
        """Canonical operator word for ``θ^*``: degeneracies after faces, applied right to left."""
        img = set(self.theta)
        missing = [i for i in range(self.source + 1) if i not in img]
        repeats = [j for j in range(self.target) if self.theta[j] == self.theta[j + 1]]
        # Faces act first, removing the top missing vertex first; the
        # degeneracies then insert repeats from the lowest position up.
        return [("s", j) for j in sorted(repeats, reverse=True)] + [("d", i) for i in sorted(missing)]

    def word(self) -> list[tuple[str, int]]:
        return [("t", 0)] * self.power + self.simplicial_word()

    def __str__(self) -> str:
        parts = [f"{g}_{i}" if g != "t" else "t" for g, i in self.word()]
        return " ∘ ".join(parts) if parts else f"id[{self.source}]"


def _parse_token(tok) -> tuple[str, int]:
    if isinstance(tok, tuple):
        return tok
    tok = tok.strip()
    if tok == "t":
        return ("t", 0)
    if tok[:2] in ("d_", "s_"):
        return (tok[0], int(tok[2:]))
    if tok[0] in "ds" and tok[1:].isdigit():
        return (tok[0], int(tok[1:]))
    raise StructureError(f"unknown generator {tok!r}")


def lambda_factorize(word: Sequence, source: int) -> LambdaMorphism:
    """Normal form of an operator word applied to ``M_source``.

    The word is written as a composite, leftmost applied last: ``["d_0", "t"]``
    means ``d_0 ∘ t``.  Tokens: ``"t"``, ``"d_i"``, ``"s_i"``.
    """
    if source < 0:
        raise StructureError("source degree must be non-negative")
    cur = source
    theta = tuple(range(source + 1))
    power = 0
    for tok in reversed(list(word)):
        g, i = _parse_token(tok)
        if g == "t":
            power = (power + 1) % (cur + 1)
        elif g == "d":
            if cur < 1 or not 0 <= i <= cur:
                raise StructureError(f"d_{i} is not defined on degree {cur}")
            out = 0
            for _ in range(power):
                if i >= 1:
                    i -= 1
                    out += 1
                else:
                    i = cur
            mono = _mono(cur, i)
            theta = tuple(theta[x] for x in mono)
            cur -= 1
            power = out % (cur + 1)
        elif g == "s":
            if not 0 <= i <= cur:
                raise StructureError(f"s_{i} is not defined on degree {cur}")
            out = 0
            for _ in range(power):
                if i >= 1:
                    i -= 1
                    out += 1
                else:
                    i = cur
                    out += 2
            epi = _epi(cur, i)
            theta = tuple(theta[x] for x in epi)
            cur += 1
            power = out % (cur + 1)
        else:
            raise StructureError(f"unknown generator {g!r}")
    return LambdaMorphism(source, cur, theta, power)


def act(m: CyclicModule, word: Sequence, source: int) -> SparseMatrix:
    """Matrix of an operator word on ``m`` (leftmost applied last)."""
    mat = SparseMatrix.identity(m.dim(source))
    cur = source
    for tok in reversed(list(word)):
        g, i = _parse_token(tok)
        if g == "t":
            mat = m.cyclic(cur) @ mat
        elif g == "d":
            mat = m.face(cur, i) @ mat
            cur -= 1
        else:
            mat = m.degeneracy(cur, i) @ mat
            cur += 1
    return mat


def enumerate_lambda(source: int, target: int, slack: int = 2) -> set[LambdaMorphism]:
    """All normal forms ``M_source -> M_target`` reached by words through degrees ``<= source+target+slack``."""
    bound = source + target + slack
    start = lambda_factorize([], source)
    seen = {start}
    frontier = [([], source)]
    words_seen = {start: []}
    while frontier:
        nxt = []
        for w, cur in frontier:
            gens = [("t", 0)] + [("d", i) for i in range(cur + 1) if cur >= 1] + \
                   ([("s", i) for i in range(cur + 1)] if cur < bound else [])
            for g in gens:
                nw = [g] + w
                nf = lambda_factorize(nw, source)
                if nf not in seen:
                    seen.add(nf)
                    words_seen[nf] = nw
                    nxt.append((nw, nf.target))
        frontier = nxt
    return {f for f in seen if f.target == target}


# --------------------------------------------------------------------------
# the pointed monoid {*, 0, 1}


@dataclass
class CyclicSet:
    """Truncated pointed cyclic set given by simplex lists and structure functions.

    Structure functions return a simplex or ``None`` for the basepoint.
    """

    max_degree: int
    simplices: list[list[tuple]]
    face_fn: Callable[[int, int, tuple], tuple | None]
    degen_fn: Callable[[int, int, tuple], tuple | None]
    cyclic_fn: Callable[[int, tuple], tuple | None]
    weight: int = 0

    def linearize(self) -> MatrixCyclicModule:
        """Reduced linearization: basepoint goes to zero."""
        D = self.max_degree
        index = [{s: n for n, s in enumerate(level)} for level in self.simplices]

        def mat(src_q, dst_q, fn):
            cols = []
            for s in self.simplices[src_q]:
                img = fn(s)
                cols.append({} if img is None else {index[dst_q][img]: ONE})
            return SparseMatrix.from_columns(len(self.simplices[dst_q]), cols)

        faces = {(q, i): mat(q, q - 1, lambda s, q=q, i=i: self.face_fn(q, i, s))
                 for q in range(1, D + 1) for i in range(q + 1)}
        degens = {(q, i): mat(q, q + 1, lambda s, q=q, i=i: self.degen_fn(q, i, s))
                  for q in range(D) for i in range(q + 1)}
        cyc = {q: mat(q, q, lambda s, q=q: self.cyclic_fn(q, s)) for q in range(D + 1)}
        return MatrixCyclicModule([len(level) for level in self.simplices], faces, degens, cyc)


def _monoid_add(a: int, b: int) -> int | None:
    s = a + b
    return None if s > 1 else s


def nerve_weight_piece(k: int, max_degree: int) -> CyclicSet:
    """Weight-``k`` piece of the cyclic bar construction on ``{*, 0, 1}`` (``1 + 1 = *``).

    Non-basepoint ``q``-simplices are the 0/1 words of length ``q+1`` with
    ``k`` ones.
    """
    if k < 0:
        raise StructureError("weight must be non-negative")
    D = max_degree
    levels = []
    for q in range(D + 1):
        words = []
        for ones in combinations(range(q + 1), k):
            w = [0] * (q + 1)
            for p in ones:
                w[p] = 1
            words.append(tuple(w))
        words.sort()
        assert len(words) == comb(q + 1, k)
        levels.append(words)

    def face(q, i, w):
        if i < q:
            s = _monoid_add(w[i], w[i + 1])
            return None if s is None else w[:i] + (s,) + w[i + 2:]
        s = _monoid_add(w[q], w[0])
        return None if s is None else (s,) + w[1:q]

    def degen(q, i, w):
        return w[:i + 1] + (0,) + w[i + 1:]

    def cyc(q, w):
        return (w[q],) + w[:q]

    return CyclicSet(D, levels, face, degen, cyc, k)


__all__ = [
    "CyclicModule",
    "CyclicMorphism",
    "CyclicSet",
    "CyclicSubquotient",
    "FreeCyclicModule",
    "LambdaMorphism",
    "MatrixCyclicModule",
    "MatrixSimplicialModule",
    "MorphismCheck",
    "SimplicialModule",
    "StructureError",
    "StructureReport",
    "Subquotient",
    "act",
    "check_morphism",
    "constant_module",
    "counit",
    "dold_kan",
    "enumerate_lambda",
    "free_counit_into",
    "free_cyclic",
    "lambda_factorize",
    "materialize",
    "morphism_map",
    "nerve_weight_piece",
    "random_invertible",
    "random_simplicial_module",
    "rebase_module",
    "subquotient",
    "validate_cyclic",
    "validate_simplicial",
    "zero_module",
]
