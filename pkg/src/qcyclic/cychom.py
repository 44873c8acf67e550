"""The periodic bicomplex of a cyclic module and the homologies read off it.

Entry ``(c, q)`` of the bicomplex is ``M_q``.  Even columns carry ``b``, odd
columns ``-b'``.  The horizontal map out of an odd column is ``1 - λ`` and out
of an even column is ``N = 1 + λ + .. + λ^q``, where ``λ = (-1)^q t``.  Total
degree is ``c + q``.

Truncation contract for a module of max degree ``D``: ``HH_n`` and ``HC_n`` are
certified for ``n <= D - 1``; the S-image out of degree ``n`` (used as the top
stage of a tower) is certified for ``n <= D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cyccat import CyclicModule, CyclicMorphism
from .exactla import (
    ChainComplex,
    ComplexError,
    Echelon,
    Homology,
    LinAlgError,
    ShortExactSequence,
    SparseMatrix,
    Subspace,
    Tower,
    TowerLimit,
    _scaled_ints,
    _to_int_vector,
    connecting_map,
    homology_at,
    induced_map,
    rank,
    solve,
    tower_limit,
)


class DepthError(LinAlgError):
    """A degree outside the certified range was requested."""


# --------------------------------------------------------------------------
# bicomplex windows


class BicomplexWindow:
    """Columns ``c_min .. c_max`` and rows ``0 .. max_row`` of the periodic bicomplex."""

    def __init__(self, m: CyclicModule, c_min: int, c_max: int, max_row: int | None = None):
        if c_min > c_max:
            raise LinAlgError("empty column range")
        self.m = m
        self.c_min, self.c_max = c_min, c_max
        self.max_row = m.max_degree if max_row is None else min(max_row, m.max_degree)
        self._d: dict[int, SparseMatrix] = {}

    def entries(self, n: int) -> list[tuple[int, int]]:
        """``(column, row)`` pairs of total degree ``n``, by increasing column."""
        out = []
        for c in range(self.c_min, self.c_max + 1):
            q = n - c
            if 0 <= q <= self.max_row:
                out.append((c, q))
        return out

    def offsets(self, n: int) -> dict[tuple[int, int], int]:
        off, out = 0, {}
        for c, q in self.entries(n):
            out[(c, q)] = off
            off += self.m.dim(q)
        return out

    def dim(self, n: int) -> int:
        return sum(self.m.dim(q) for _, q in self.entries(n))

    def vertical(self, c: int, q: int) -> SparseMatrix:
        return self.m.b(q) if c % 2 == 0 else -self.m.bprime(q)

    def horizontal(self, c: int, q: int) -> SparseMatrix:
        """Map ``(c, q) -> (c - 1, q)``."""
        return self.m.one_minus_lam(q) if c % 2 else self.m.norm(q)

    def d(self, n: int) -> SparseMatrix:
        """Total differential ``Tot_n -> Tot_{n-1}``."""
        got = self._d.get(n)
        if got is not None:
            return got
        src, dst = self.offsets(n), self.offsets(n - 1)
        data: dict[int, dict[int, Fraction]] = {}
        for (c, q), o in src.items():
            blocks = []
            if q >= 1 and (c, q - 1) in dst:
                blocks.append((dst[(c, q - 1)], self.vertical(c, q)))
            if (c - 1, q) in dst:
                blocks.append((dst[(c - 1, q)], self.horizontal(c, q)))
            for ro, mat in blocks:
                for col in mat.nonzero_columns():
                    tgt = data.setdefault(o + col, {})
                    for r, v in mat.column(col).items():
                        tgt[ro + r] = v
        out = SparseMatrix._wrap(self.dim(n - 1), self.dim(n), data)
        self._d[n] = out
        return out

    def degrees(self) -> range:
        return range(self.c_min, self.c_max + self.max_row + 1)

    def check_square_zero(self) -> tuple[bool, int | None]:
        """``D ∘ D = 0`` in every total degree of the window."""
        for n in self.degrees():
            if not (self.d(n - 1) @ self.d(n)).is_zero():
                return False, n
        return True, None

    def chain_complex(self, degrees: Sequence[int]) -> ChainComplex:
        dims = {n: self.dim(n) for n in set(degrees) | {n - 1 for n in degrees}}
        return ChainComplex(dims, {n: self.d(n) for n in degrees})

    def column_selection(self, n: int, columns) -> list[int]:
        """Indices of ``Tot_n`` lying in the given columns."""
        out = []
        for (c, q), o in self.offsets(n).items():
            if c in columns:
                out.extend(range(o, o + self.m.dim(q)))
        return out

    def column_part(self, n: int, c: int) -> tuple[int, int]:
        """``(offset, size)`` of column ``c`` inside ``Tot_n`` (size 0 if absent)."""
        q = n - c
        off = self.offsets(n).get((c, q))
        return (0, 0) if off is None else (off, self.m.dim(q))


def cp_window(m: CyclicModule, c_min: int, c_max: int, max_row: int | None = None) -> BicomplexWindow:
    """Window of the periodic bicomplex; ``D ∘ D = 0`` is verified before returning."""
    w = BicomplexWindow(m, c_min, c_max, max_row)
    ok, n = w.check_square_zero()
    if not ok:
        raise ComplexError(f"total differential does not square to zero in degree {n}")
    return w


def odd_column_acyclicity(m: CyclicModule, max_degree: int | None = None) -> list[int]:
    """Homology dims of the ``b'`` complex in degrees ``0 .. D-1`` (all zero when acyclic)."""
    D = m.max_degree if max_degree is None else max_degree
    out = []
    for q in range(D):
        out.append(homology_at(m.bprime(q + 1), m.bprime(q)).dim)
    return out


def row_acyclicity(m: CyclicModule, max_degree: int | None = None) -> list[tuple[int, int]]:
    """Per row ``q``: homology of ``N`` after ``1-λ`` and of ``1-λ`` after ``N``.

    Over Q both vanish, since ``ker(1-λ) = im N`` and ``ker N = im(1-λ)``.
    """
    D = m.max_degree if max_degree is None else max_degree
    out = []
    for q in range(D + 1):
        n, t = m.norm(q), m.one_minus_lam(q)
        out.append((homology_at(n, t).dim, homology_at(t, n).dim))
    return out


# --------------------------------------------------------------------------
# the engine


@dataclass
class HCResult:
    degree: int
    dim: int
    S: SparseMatrix  # HC_n -> HC_{n-2}
    homology: Homology


class CyclicHomology:
    """Lazily computed ``HH``, ``HC``, ``S``, ``I``, ``B`` for one cyclic module."""

    def __init__(self, m: CyclicModule):
        self.m = m
        self.D = m.max_degree
        self.cc = BicomplexWindow(m, 0, self.D + 1)
        self._hh: dict[int, Homology] = {}
        self._hc: dict[int, Homology] = {}
        self._S: dict[int, SparseMatrix] = {}
        self._top: dict[int, Subspace] = {}

    def _certify(self, n: int, what: str, bound: int | None = None) -> None:
        bound = self.D - 1 if bound is None else bound
        if n > bound:
            raise DepthError(f"{what}_{n} needs max degree >= {n + (self.D - bound)}, module has {self.D}")

    # Hochschild homology: column 0

    def hh(self, n: int) -> Homology:
        self._certify(n, "HH")
        if n < 0:
            return homology_at(SparseMatrix.zeros(0, 0), SparseMatrix.zeros(0, 0))
        h = self._hh.get(n)
        if h is None:
            h = self._hh[n] = homology_at(self.m.b(n + 1), self.m.b(n))
        return h

    # cyclic homology: columns >= 0

    def hc(self, n: int) -> Homology:
        self._certify(n, "HC")
        if n < 0:
            return homology_at(SparseMatrix.zeros(0, 0), SparseMatrix.zeros(0, 0))
        h = self._hc.get(n)
        if h is None:
            h = self._hc[n] = homology_at(self.cc.d(n + 1), self.cc.d(n))
        return h

    def shift(self, n: int) -> SparseMatrix:
        """Chain map ``Tot_n -> Tot_{n-2}`` dropping columns 0, 1 and moving column ``c`` to ``c - 2``."""
        src = self.cc.offsets(n)
        dst = self.cc.offsets(n - 2)
        data = {}
        for (c, q), o in src.items():
            if c >= 2:
                ro = dst[(c - 2, q)]
                for k in range(self.m.dim(q)):
                    data[o + k] = {ro + k: Fraction(1)}
        return SparseMatrix._wrap(self.cc.dim(n - 2), self.cc.dim(n), data)

    def S(self, n: int) -> SparseMatrix:
        """``S: HC_n -> HC_{n-2}`` in homology coordinates."""
        got = self._S.get(n)
        if got is None:
            src = self.hc(n)
            if n < 2:
                got = SparseMatrix.zeros(0, src.dim)
            else:
                got = induced_map(self.shift(n), src, self.hc(n - 2))
            self._S[n] = got
        return got

    def hc_result(self, n: int) -> HCResult:
        h = self.hc(n)
        return HCResult(n, h.dim, self.S(n), h)

    def I(self, n: int) -> SparseMatrix:
        """``I: HH_n -> HC_n`` from the inclusion of column 0."""
        incl = SparseMatrix.identity(self.cc.dim(n)).select(cols=self.cc.column_selection(n, {0}))
        return induced_map(incl, self.hh(n), self.hc(n))

    def B(self, n: int) -> SparseMatrix:
        """``B: HC_{n-2} -> HH_{n-1}``: snake boundary of ``col 0 -> CC -> cols >= 1``."""
        self._certify(n - 1, "HH")
        if n < 2:
            return SparseMatrix.zeros(self.hh(n - 1).dim if n >= 1 else 0, 0)
        m, cc = self.m, self.cc
        quo = BicomplexWindow(m, 1, self.D + 1)
        degs = [n + 1, n, n - 1]
        col0 = ChainComplex({k: m.dim(k) for k in range(n - 2, n + 2) if k <= self.D},
                            {k: m.b(k) for k in degs if 1 <= k <= self.D})
        mid = cc.chain_complex(degs)
        qc = quo.chain_complex(degs)
        incl = {k: SparseMatrix.identity(cc.dim(k)).select(cols=cc.column_selection(k, {0})) for k in range(n - 2, n + 1)}
        proj = {}
        for k in range(n - 2, n + 2):
            zero_col = set(cc.column_selection(k, {0}))
            proj[k] = SparseMatrix.identity(cc.dim(k)).select(rows=[i for i in range(cc.dim(k)) if i not in zero_col])
        ses = ShortExactSequence(col0, mid, qc, incl, proj)
        hq = homology_at(quo.d(n + 1), quo.d(n))
        delta = connecting_map(ses, n, hq, self.hh(n - 1))
        # cols >= 1 -> cols >= 2 is a quasi-isomorphism identified with HC_{n-2}
        qoff, coff = quo.offsets(n), cc.offsets(n - 2)
        data = {}
        for (c, q), o in qoff.items():
            if c >= 2:
                ro = coff[(c - 2, q)]
                for k in range(m.dim(q)):
                    data[o + k] = {ro + k: Fraction(1)}
        shift = SparseMatrix._wrap(cc.dim(n - 2), quo.dim(n), data)
        iso = induced_map(shift, hq, self.hc(n - 2))
        if iso.rows != iso.cols or rank(iso) != iso.rows:
            raise ComplexError(f"columns >= 1 are not quasi-isomorphic to HC_{n - 2}")
        return delta @ solve(iso, SparseMatrix.identity(iso.rows))

    # S-image from one degree above the certified range

    def z1_lift(self, n: int, w_col0: dict) -> dict:
        """Solve ``b' z = N w`` in ``M_{n-1}`` for ``w ∈ M_{n-2}`` using the extra degeneracy."""
        m = self.m
        nw = m.norm(n - 2).apply(w_col0)
        z = m.extra_degeneracy(n - 2).apply(nw)
        if m.bprime(n - 1).apply(z) != nw:
            z_m = solve(m.bprime(n - 1), SparseMatrix.from_columns(m.dim(n - 2), [nw]))
            z = dict(z_m.column(0))
        return z

    def s_image(self, n: int) -> Subspace:
        """``S(Z_n)`` inside ``HC_{n-2}`` (homology coordinates), needing module degrees ``<= n`` only.

        A class ``[w]`` lies in the image iff the cycle extends by columns 0
        and 1: pick ``z_1`` with ``b' z_1 = N w_0``; the extension exists iff
        ``(1 - λ) z_1`` is a ``b``-boundary in ``M_{n-1}``.
        """
        self._certify(n, "S-image", self.D)
        got = self._top.get(n)
        if got is not None:
            return got
        target = self.hc(n - 2)
        if target.dim == 0:
            got = Subspace.zero(0)
        else:
            m = self.m
            off, size = self.cc.column_part(n - 2, 0)
            obstructions = []
            for j in range(target.dim):
                rep = target.reps.column(j)
                w0 = {k - off: v for k, v in rep.items() if off <= k < off + size}
                z1 = self.z1_lift(n, w0)
                obstructions.append(m.one_minus_lam(n - 1).apply(z1))
            got = _relations_modulo(m.b(n), obstructions, m.dim(n - 1), target.dim)
        self._top[n] = got
        return got


def _relations_modulo(span_cols: SparseMatrix, vectors: list[dict], ambient: int, count: int) -> Subspace:
    """Coefficient vectors ``c`` with ``Σ c_i v_i`` in the column span of ``span_cols``."""
    ech = Echelon(ambient)
    for j in sorted(span_cols.nonzero_columns()):
        ech.add(_to_int_vector(span_cols.column(j)), {})
    rels = []
    for i, v in enumerate(vectors):
        iv, den = _scaled_ints(v)
        rest, s, combo = ech.reduce(iv, track=True)
        if rest:
            full = {i: s}
            for k, x in combo.items():
                full[k] = full.get(k, 0) - x
            ech.insert_reduced(rest, {k: x for k, x in full.items() if x})
        else:
            vec = {i: Fraction(s)}
            for k, x in combo.items():
                vec[k] = vec.get(k, 0) - x
            # rescale: combo entries refer to integer-scaled vectors v_k * den_k
            rels.append(vec)
    if not rels:
        return Subspace.zero(count)
    return Subspace.span(count, _unscale(rels, vectors))


def _unscale(rels: list[dict], vectors: list[dict]) -> SparseMatrix:
    # Echelon combos are over the integer-scaled vectors den_i * v_i.
    dens = [_scaled_ints(v)[1] for v in vectors]
    cols = [{k: Fraction(x) * dens[k] for k, x in r.items() if x} for r in rels]
    return SparseMatrix.from_columns(len(vectors), cols)


# --------------------------------------------------------------------------
# convenience wrappers


def hc(m: CyclicModule, n: int) -> HCResult:
    return CyclicHomology(m).hc_result(n)


@dataclass
class SBINode:
    where: str
    incoming: str
    outgoing: str
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.rank_in + self.rank_out == self.dim


@dataclass
class SBIReport:
    degrees: list[int]
    hh_dims: dict[int, int]
    hc_dims: dict[int, int]
    S: dict[int, SparseMatrix]
    B: dict[int, SparseMatrix]
    I: dict[int, SparseMatrix]
    nodes: list[SBINode]
    hc_minus_dims: dict[int, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)


def _node(where, fin, fout, name_in, name_out, dim) -> SBINode:
    comp = (fout @ fin).is_zero() if fin.cols and fout.rows else True
    return SBINode(where, name_in, name_out, dim, rank(fin), rank(fout), comp)


def sbi(m: CyclicModule, engine: CyclicHomology | None = None) -> SBIReport:
    """``.. -> HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} -> ..`` with exactness checked at every certified node."""
    e = engine or CyclicHomology(m)
    top = e.D - 1
    degs = list(range(0, top + 1))
    hh_d = {n: e.hh(n).dim for n in degs}
    hc_d = {n: e.hc(n).dim for n in degs}
    S = {n: e.S(n) for n in degs}
    I = {n: e.I(n) for n in degs}
    B = {n: e.B(n) for n in range(2, top + 2)}
    nodes = []

    def zero(rows, cols):
        return SparseMatrix.zeros(rows, cols)

    for n in degs:
        # at HH_n: B_{n+1}: HC_{n-1} -> HH_n, then I_n
        b_in = B.get(n + 1, zero(hh_d[n], hc_d.get(n - 1, 0)))
        nodes.append(_node(f"HH_{n}", b_in, I[n], f"B: HC_{n - 1} -> HH_{n}", f"I: HH_{n} -> HC_{n}", hh_d[n]))
        # at HC_n: I_n then S_n
        nodes.append(_node(f"HC_{n}", I[n], S[n], f"I: HH_{n} -> HC_{n}", f"S: HC_{n} -> HC_{n - 2}", hc_d[n]))
        # at HC_{n-2}: S_n then B_n
        if n >= 2:
            nodes.append(_node(f"HC_{n - 2}", S[n], B[n], f"S: HC_{n} -> HC_{n - 2}",
                               f"B: HC_{n - 2} -> HH_{n - 1}", hc_d[n - 2]))
    return SBIReport(degs, hh_d, hc_d, S, B, I, nodes)


# --------------------------------------------------------------------------
# negative cyclic homology via column windows


@dataclass
class HCMinusResult:
    degree: int
    status: str
    dim: int | None
    stage_columns: list[int]
    stage_dims: list[int]
    limit: TowerLimit | None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "stabilized"


def _window_tower(m: CyclicModule, n: int, window: int) -> tuple[Tower | None, list[int], list[Homology]]:
    """Tower ``H_n(W_p0) <- H_n(W_{p0-2}) <- ..`` with ``W_p`` = columns ``p .. 0``.

    ``p0`` is the largest even column ``<= min(0, n)``; windows to its right
    miss degree ``n`` entirely.  ``W_p`` in degrees ``n, n+1`` needs rows up
    to ``n + 1 - p``; the deepest stage may use cycles only (rows up to
    ``n - p``).
    """
    D = m.max_degree
    cols, homs, spaces, maps = [], [], [], []
    p = min(0, n)
    p -= p % 2
    while n + 1 - p <= D:
        w = BicomplexWindow(m, p, 0)
        homs.append(homology_at(w.d(n + 1), w.d(n)))
        cols.append(p)
        p -= 2
    if not homs:
        return None, cols, homs
    deep_cycles = None
    if n - p <= D:
        w = BicomplexWindow(m, p, 0)
        from .exactla import decompose

        deep_cycles = decompose(w.d(n)).kernel
        cols.append(p)
    for i, h in enumerate(homs):
        spaces.append(h.dim)
    for i in range(1, len(homs)):
        w_big = BicomplexWindow(m, cols[i], 0)
        w_small = BicomplexWindow(m, cols[i - 1], 0)
        maps.append(induced_map(_column_quotient(w_big, w_small, n), homs[i], homs[i - 1]))
    if deep_cycles is not None:
        w_big = BicomplexWindow(m, cols[-1], 0)
        w_small = BicomplexWindow(m, cols[-2], 0)
        img = _column_quotient(w_big, w_small, n) @ deep_cycles.basis
        spaces.append(deep_cycles.dim)
        maps.append(homs[-1].coords(img))
    return Tower(spaces, maps), cols, homs


def _column_quotient(big: BicomplexWindow, small: BicomplexWindow, n: int) -> SparseMatrix:
    so = small.offsets(n)
    data = {}
    for (c, q), o in big.offsets(n).items():
        ro = so.get((c, q))
        if ro is None:
            continue
        for k in range(big.m.dim(q)):
            data[o + k] = {ro + k: Fraction(1)}
    return SparseMatrix._wrap(small.dim(n), big.dim(n), data)


def hc_minus(m: CyclicModule, n: int, window: int = 3) -> HCMinusResult:
    """``HC^-_n`` as the limit of column-window homologies.

    The base stage is ``HH_n`` for ``n >= 0``.

    Certified only when the window tower in degree ``n`` stabilizes and the
    tower in degree ``n + 1`` is Mittag-Leffler by the same test.
    """
    tower, cols, homs = _window_tower(m, n, window)
    if tower is None:
        return HCMinusResult(n, "undetermined", None, cols, [], None, "no window fits in the max degree")
    lim = tower_limit(tower, window)
    dims = list(tower.spaces)
    if not lim.stabilized:
        return HCMinusResult(n, "undetermined", None, cols, dims, lim, lim.reason)
    tower1, _, _ = _window_tower(m, n + 1, window)
    lim1 = tower_limit(tower1, window) if tower1 is not None else None
    if lim1 is None or not lim1.stabilized:
        return HCMinusResult(n, "undetermined", None, cols, dims, lim,
                             "degree n+1 tower not shown Mittag-Leffler (lim^1 unknown)")
    return HCMinusResult(n, "stabilized", lim.lim_dim, cols, dims, lim)


def hc_to_hc_minus(m: CyclicModule, n: int, window: int = 3, engine: CyclicHomology | None = None):
    """Boundary ``HC_{n-1} -> HC^-_n`` of ``CC^- -> CP -> CP/CC^-``, landing in the base stage ``HH_n``.

    Returns ``(matrix into the eventual image, rank, HCMinusResult)``.
    """
    e = engine or CyclicHomology(m)
    res = hc_minus(m, n, window)
    if not res.certified:
        return None, None, res
    src = e.hc(n - 1) if n >= 1 else None
    image = res.limit.images[0]
    if src is None or src.dim == 0:
        return SparseMatrix.zeros(image.dim, 0), 0, res
    base = homology_at(BicomplexWindow(m, 0, 0).d(n + 1), BicomplexWindow(m, 0, 0).d(n))
    cols = []
    off, size = e.cc.column_part(n - 1, 0)
    for j in range(src.dim):
        rep = src.reps.column(j)
        w0 = {k - off: v for k, v in rep.items() if off <= k < off + size}
        z1 = e.z1_lift(n + 1, w0)
        cols.append(m.one_minus_lam(n).apply(z1))
    vals = base.coords(SparseMatrix.from_columns(m.dim(n), cols))
    if image.dim:
        coords = solve(image.basis, vals)
    else:
        if not vals.is_zero():
            raise ComplexError("boundary leaves the eventual image")
        coords = SparseMatrix.zeros(0, src.dim)
    return coords, rank(coords), res


# --------------------------------------------------------------------------
# periodic cyclic homology


@dataclass
class ParityTower:
    parity: int
    degrees: list[int]  # HC degrees of the full stages, base first
    top_degree: int | None  # degree whose S-image forms the deepest stage
    tower: Tower | None
    limit: TowerLimit | None
    reason: str = ""

    @property
    def stabilized(self) -> bool:
        return self.limit is not None and self.limit.stabilized

    def image(self, stage: int) -> Subspace:
        return self.limit.images[stage]


@dataclass
class HPReport:
    module: CyclicModule
    window: int
    towers: dict[int, ParityTower]
    engine: CyclicHomology

    def status(self, parity: int) -> str:
        if self.towers[parity].stabilized and self.towers[1 - parity].stabilized:
            return "stabilized"
        return "undetermined"

    def dim(self, parity: int) -> int | None:
        """``dim HP_parity``: needs both towers stabilized (the other one controls ``lim^1``)."""
        if self.status(parity) != "stabilized":
            return None
        return self.towers[parity].limit.lim_dim

    def lim1_zero(self, parity: int) -> bool | None:
        t = self.towers[1 - parity]
        return t.limit.lim1_zero if t.stabilized else None

    @property
    def certified_degrees(self) -> list[int]:
        return sorted(d for t in self.towers.values() for d in t.degrees)


def _parity_tower(e: CyclicHomology, parity: int, window: int) -> ParityTower:
    D = e.D
    top_full = None
    k = parity
    while k + 2 <= D:
        top_full = k
        k += 2
    if top_full is None:
        return ParityTower(parity, [], None, None, None, f"max degree {D} too small for any stage")
    degrees = list(range(parity, top_full + 1, 2))
    spaces = [e.hc(n).dim for n in degrees]
    maps = [e.S(n) for n in degrees[1:]]
    top = top_full + 2
    img = e.s_image(top)
    spaces.append(img.dim)
    maps.append(img.basis if img.dim else SparseMatrix.zeros(spaces[-2], 0))
    tower = Tower(spaces, maps)
    lim = tower_limit(tower, window)
    return ParityTower(parity, degrees, top, tower, lim, lim.reason)


def hp(m: CyclicModule, window: int = 3, engine: CyclicHomology | None = None) -> HPReport:
    """Periodic cyclic homology through the S-towers of both parities.

    Stages are ``HC_p, HC_{p+2}, ..`` up to the certified range, then the
    S-image from two degrees higher.  ``window + 2`` stages (max degree
    ``>= 2 * window + 3``) are needed for a verdict.
    """
    e = engine or CyclicHomology(m)
    return HPReport(m, window, {p: _parity_tower(e, p, window) for p in (0, 1)}, e)


@dataclass
class HPMap:
    matrices: dict[int, SparseMatrix]
    ranks: dict[int, int]
    src_dims: dict[int, int]
    dst_dims: dict[int, int]

    def iso(self, parity: int) -> bool:
        return self.ranks[parity] == self.src_dims[parity] == self.dst_dims[parity]

    @property
    def iso_both(self) -> bool:
        return self.iso(0) and self.iso(1)


def total_map(f: CyclicMorphism, src: BicomplexWindow, dst: BicomplexWindow, n: int) -> SparseMatrix:
    """``f`` applied entrywise on ``Tot_n``."""
    so, do = src.offsets(n), dst.offsets(n)
    data = {}
    for (c, q), o in so.items():
        ro = do.get((c, q))
        if ro is None:
            continue
        mat = f.maps[q]
        for col in mat.nonzero_columns():
            data[o + col] = {ro + r: v for r, v in mat.column(col).items()}
    return SparseMatrix._wrap(dst.dim(n), src.dim(n), data)


def hc_map(f: CyclicMorphism, src: CyclicHomology, dst: CyclicHomology, n: int) -> SparseMatrix:
    return induced_map(total_map(f, src.cc, dst.cc, n), src.hc(n), dst.hc(n))


def restrict_to_images(mat: SparseMatrix, src_img: Subspace, dst_img: Subspace) -> SparseMatrix:
    """Matrix of ``mat`` from ``src_img`` to ``dst_img`` in their bases (raises if it leaves ``dst_img``)."""
    if src_img.dim == 0:
        return SparseMatrix.zeros(dst_img.dim, 0)
    vals = mat @ src_img.basis
    if dst_img.dim == 0:
        if not vals.is_zero():
            raise ComplexError("map leaves the eventual image")
        return SparseMatrix.zeros(0, src_img.dim)
    try:
        return solve(dst_img.basis, vals)
    except LinAlgError:
        raise ComplexError("map leaves the eventual image") from None


def hp_map(f: CyclicMorphism, src: HPReport, dst: HPReport, stage: int = 0) -> HPMap:
    """Induced map on ``HP`` through the eventual images at a tower stage."""
    mats, ranks, sd, dd = {}, {}, {}, {}
    for p in (0, 1):
        if src.status(p) != "stabilized" or dst.status(p) != "stabilized":
            raise DepthError(f"HP towers of parity {p} are not stabilized")
        n = src.towers[p].degrees[stage]
        hcm = hc_map(f, src.engine, dst.engine, n)
        m = restrict_to_images(hcm, src.towers[p].image(stage), dst.towers[p].image(stage))
        mats[p] = m
        ranks[p] = rank(m)
        sd[p] = src.dim(p)
        dd[p] = dst.dim(p)
    return HPMap(mats, ranks, sd, dd)


__all__ = [
    "BicomplexWindow",
    "CyclicHomology",
    "DepthError",
    "HCMinusResult",
    "HCResult",
    "HPMap",
    "HPReport",
    "ParityTower",
    "SBINode",
    "SBIReport",
    "cp_window",
    "hc",
    "hc_map",
    "hc_minus",
    "hc_to_hc_minus",
    "hp",
    "hp_map",
    "odd_column_acyclicity",
    "row_acyclicity",
    "restrict_to_images",
    "sbi",
    "total_map",
]
