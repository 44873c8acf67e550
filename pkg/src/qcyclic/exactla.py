"""Exact sparse linear algebra over the rationals.

Matrices are stored column-major as ``{col: {row: Fraction}}`` with no stored
zeros.  Elimination runs fraction-free on primitive integer columns and only
turns results back into fractions at the boundary of this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "LinAlgError",
    "ComplexError",
    "as_scalar",
    "SparseMatrix",
    "Subspace",
    "Echelon",
    "Decomposition",
    "decompose",
    "rank",
    "solve",
    "Homology",
    "homology_at",
    "induced_map",
    "ChainComplex",
    "ShortExactSequence",
    "connecting_map",
    "Tower",
    "TowerLimit",
    "tower_limit",
]


class LinAlgError(ValueError):
    """Raised when an exact linear-algebra precondition fails."""


class ComplexError(LinAlgError):
    """Raised when a would-be chain complex or chain map is not one."""


def as_scalar(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to an exact scalar.

    Floats are refused: they carry rounding that cannot be undone.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise LinAlgError(f"malformed rational {value!r}") from None
        if d == 0:
            raise LinAlgError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    raise LinAlgError(f"cannot use {type(value).__name__} {value!r} as an exact scalar")


class SparseMatrix:
    """Immutable sparse matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Mapping[int, Mapping[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise LinAlgError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        clean: dict[int, dict[int, Fraction]] = {}
        for c, col in (data or {}).items():
            if not 0 <= c < cols:
                raise LinAlgError(f"column index {c} outside 0..{cols - 1}")
            out = {}
            for r, v in col.items():
                if not 0 <= r < rows:
                    raise LinAlgError(f"row index {r} outside 0..{rows - 1}")
                v = as_scalar(v)
                if v:
                    out[r] = v
            if out:
                clean[c] = out
        self._data = clean

    @classmethod
    def _wrap(cls, rows: int, cols: int, data: dict[int, dict[int, Fraction]]) -> "SparseMatrix":
        # Trusted constructor: data already clean.
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls._wrap(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        one = Fraction(1)
        return cls._wrap(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def scalar(cls, n: int, value) -> "SparseMatrix":
        value = as_scalar(value)
        if not value:
            return cls.zeros(n, n)
        return cls._wrap(n, n, {i: {i: value} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data: dict[int, dict[int, object]] = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise LinAlgError("ragged dense matrix")
            for j, v in enumerate(row):
                data.setdefault(j, {})[i] = v
        return cls(nrows, ncols, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        return cls(rows, len(columns), {j: col for j, col in enumerate(columns)})

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, object]]) -> "SparseMatrix":
        """Build from ``(row, col, value)`` triples; repeated positions are summed."""
        data: dict[int, dict[int, Fraction]] = {}
        for r, c, v in entries:
            v = as_scalar(v)
            if not v:
                continue
            col = data.setdefault(c, {})
            col[r] = col.get(r, 0) + v
        return cls(rows, cols, data)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> Mapping[int, Fraction]:
        return self._data.get(j, {})

    def nonzero_columns(self) -> Iterable[int]:
        return self._data.keys()

    def get(self, r: int, c: int) -> Fraction:
        return self._data.get(c, {}).get(r, Fraction(0))

    def entries(self) -> Iterable[tuple[int, int, Fraction]]:
        for c, col in self._data.items():
            for r, v in col.items():
                yield r, c, v

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    # algebra

    def transpose(self) -> "SparseMatrix":
        data: dict[int, dict[int, Fraction]] = {}
        for r, c, v in self.entries():
            data.setdefault(r, {})[c] = v
        return SparseMatrix._wrap(self.cols, self.rows, data)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Multiply a sparse column vector ``{index: value}``."""
        out: dict[int, Fraction] = {}
        data = self._data
        for k, x in vec.items():
            col = data.get(k)
            if col is None:
                continue
            for r, v in col.items():
                out[r] = out.get(r, 0) + x * v
        return {r: v for r, v in out.items() if v}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        data = {}
        for j, col in other._data.items():
            out = self.apply(col)
            if out:
                data[j] = out
        return SparseMatrix._wrap(self.rows, other.cols, data)

    def _combine(self, other: "SparseMatrix", sign: int) -> "SparseMatrix":
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {c: dict(col) for c, col in self._data.items()}
        for c, col in other._data.items():
            tgt = data.setdefault(c, {})
            for r, v in col.items():
                nv = tgt.get(r, 0) + sign * v
                if nv:
                    tgt[r] = nv
                else:
                    tgt.pop(r, None)
            if not tgt:
                del data[c]
        return SparseMatrix._wrap(self.rows, self.cols, data)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "SparseMatrix":
        return self * -1

    def __mul__(self, scalar) -> "SparseMatrix":
        s = as_scalar(scalar)
        if not s:
            return SparseMatrix.zeros(self.rows, self.cols)
        return SparseMatrix._wrap(
            self.rows, self.cols, {c: {r: s * v for r, v in col.items()} for c, col in self._data.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset((r, c, v) for r, c, v in self.entries())))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 36:
            body = "; ".join(" ".join(str(v) for v in row) for row in self.to_dense())
            return f"SparseMatrix({self.rows}x{self.cols}: [{body}])"
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # reshaping

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "SparseMatrix":
        """Submatrix on the given (ordered) row and column index lists."""
        if cols is None:
            cols = range(self.cols)
        if rows is None:
            rmap = None
            nrows = self.rows
        else:
            rmap = {r: i for i, r in enumerate(rows)}
            nrows = len(rows)
        data = {}
        for j, c in enumerate(cols):
            col = self._data.get(c)
            if not col:
                continue
            if rmap is None:
                data[j] = dict(col)
            else:
                out = {rmap[r]: v for r, v in col.items() if r in rmap}
                if out:
                    data[j] = out
        return SparseMatrix._wrap(nrows, len(cols), data)

    @staticmethod
    def hstack(mats: Sequence["SparseMatrix"], rows: int | None = None) -> "SparseMatrix":
        if not mats:
            return SparseMatrix.zeros(rows or 0, 0)
        nrows = mats[0].rows
        data = {}
        off = 0
        for m in mats:
            if m.rows != nrows:
                raise LinAlgError("hstack row mismatch")
            for c, col in m._data.items():
                data[c + off] = dict(col)
            off += m.cols
        return SparseMatrix._wrap(nrows, off, data)

    @staticmethod
    def vstack(mats: Sequence["SparseMatrix"], cols: int | None = None) -> "SparseMatrix":
        if not mats:
            return SparseMatrix.zeros(0, cols or 0)
        ncols = mats[0].cols
        data: dict[int, dict[int, Fraction]] = {}
        off = 0
        for m in mats:
            if m.cols != ncols:
                raise LinAlgError("vstack column mismatch")
            for c, col in m._data.items():
                tgt = data.setdefault(c, {})
                for r, v in col.items():
                    tgt[r + off] = v
            off += m.rows
        return SparseMatrix._wrap(off, ncols, data)

    @staticmethod
    def block_diag(mats: Sequence["SparseMatrix"]) -> "SparseMatrix":
        data = {}
        ro = co = 0
        for m in mats:
            for c, col in m._data.items():
                data[c + co] = {r + ro: v for r, v in col.items()}
            ro += m.rows
            co += m.cols
        return SparseMatrix._wrap(ro, co, data)


# --------------------------------------------------------------------------
# fraction-free elimination


def _to_int_vector(col: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a rational vector to a primitive integer vector (same span)."""
    den = 1
    for v in col.values():
        d = v.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    out = {r: int(v * den) for r, v in col.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {r: v // g for r, v in out.items()}
    return out


class Echelon:
    """Incremental column echelon form with tracked combinations.

    Each stored pivot vector has a distinct lowest (largest-index) row.  A
    pivot optionally carries a ``combo``: an integer combination of caller
    chosen generator labels that equals the stored vector.  Reducing a vector
    ``v`` returns ``(rest, scale, combo)`` with
    ``rest == scale * v - sum(combo[g] * generator[g])``.
    """

    __slots__ = ("nrows", "_piv")

    def __init__(self, nrows: int):
        self.nrows = nrows
        self._piv: dict[int, tuple[dict[int, int], dict | None]] = {}

    @property
    def rank(self) -> int:
        return len(self._piv)

    def pivot_rows(self) -> list[int]:
        return sorted(self._piv)

    def reduce(self, vec: dict[int, int], track: bool = False):
        v = dict(vec)
        s = 1
        combo: dict = {}
        piv = self._piv
        while v:
            r = max(v)
            p = piv.get(r)
            if p is None:
                break
            w, wc = p
            a = w[r]
            b = v[r]
            g = gcd(a, b)
            a //= g
            b //= g
            if a < 0:
                a, b = -a, -b
            if a != 1:
                v = {k: a * x for k, x in v.items()}
                if track:
                    s *= a
                    combo = {k: a * x for k, x in combo.items()}
            for k, x in w.items():
                nv = v.get(k, 0) - b * x
                if nv:
                    v[k] = nv
                else:
                    del v[k]
            if track and wc:
                for k, x in wc.items():
                    nv = combo.get(k, 0) + b * x
                    if nv:
                        combo[k] = nv
                    else:
                        del combo[k]
            if a != 1:
                g = s if track else 0
                for x in v.values():
                    g = gcd(g, x)
                    if g == 1:
                        break
                if track and g != 1:
                    for x in combo.values():
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    v = {k: x // g for k, x in v.items()}
                    if track:
                        s //= g
                        combo = {k: x // g for k, x in combo.items()}
        return v, s, combo

    def insert_reduced(self, v: dict[int, int], combo: dict | None = None) -> None:
        """Store an already reduced nonzero vector as a new pivot."""
        r = max(v)
        if r in self._piv:
            raise LinAlgError("vector is not reduced")
        self._piv[r] = (v, combo)

    def add(self, vec: dict[int, int], combo: dict | None = None) -> bool:
        """Reduce and insert; returns True if the vector was independent."""
        track = combo is not None
        v, s, c = self.reduce(vec, track=track)
        if not v:
            return False
        if track:
            full = {k: s * x for k, x in combo.items()}
            for k, x in c.items():
                nv = full.get(k, 0) - x
                if nv:
                    full[k] = nv
                else:
                    full.pop(k, None)
            self.insert_reduced(v, full)
        else:
            self.insert_reduced(v, None)
        return True

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        v, _, _ = self.reduce(_to_int_vector(vec))
        return not v


def rank(m: SparseMatrix) -> int:
    """Rank over Q."""
    ech = Echelon(m.rows)
    for j in sorted(m.nonzero_columns()):
        ech.add(_to_int_vector(m.column(j)))
    return ech.rank


class Subspace:
    """Subspace of Q^n spanned by the (independent) columns of ``basis``."""

    __slots__ = ("ambient_dim", "basis", "_ech")

    def __init__(self, ambient_dim: int, basis: SparseMatrix, *, check: bool = True):
        if basis.rows != ambient_dim:
            raise LinAlgError("basis rows must equal ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._ech = None
        if check and rank(basis) != basis.cols:
            raise LinAlgError("subspace basis columns are linearly dependent")

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, SparseMatrix.zeros(n, 0), check=False)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, SparseMatrix.identity(n), check=False)

    @classmethod
    def span(cls, n: int, vectors: SparseMatrix) -> "Subspace":
        """Span of arbitrary (possibly dependent) columns."""
        ech = Echelon(n)
        keep = []
        for j in sorted(vectors.nonzero_columns()):
            if ech.add(_to_int_vector(vectors.column(j))):
                keep.append(j)
        sub = cls(n, vectors.select(cols=keep), check=False)
        sub._ech = ech
        return sub

    @property
    def dim(self) -> int:
        return self.basis.cols

    def _echelon(self) -> Echelon:
        if self._ech is None:
            ech = Echelon(self.ambient_dim)
            for j in range(self.basis.cols):
                ech.add(_to_int_vector(self.basis.column(j)))
            self._ech = ech
        return self._ech

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return self._echelon().contains(vec)

    def contains_all(self, vectors: SparseMatrix) -> bool:
        ech = self._echelon()
        return all(ech.contains(vectors.column(j)) for j in vectors.nonzero_columns())

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


@dataclass(frozen=True)
class Decomposition:
    rank: int
    kernel: Subspace
    image: Subspace


def decompose(m: SparseMatrix) -> Decomposition:
    """Rank, a kernel basis and an image basis of ``m``.

    The image basis consists of original columns of ``m``; kernel vectors are
    exact integer combinations of columns.
    """
    ech = Echelon(m.rows)
    image_cols = []
    kernel = []
    dens: dict[int, int] = {}  # generator j stands for dens[j] * column j
    for j in range(m.cols):
        col = m.column(j)
        if not col:
            kernel.append({j: Fraction(1)})
            continue
        iv, dens[j] = _scaled_ints(col)
        v, s, c = ech.reduce(iv, track=True)
        if v:
            full = {j: s}
            for k, x in c.items():
                full[k] = full.get(k, 0) - x
            ech.insert_reduced(v, {k: x for k, x in full.items() if x})
            image_cols.append(j)
        else:
            vec = {j: s}
            for k, x in c.items():
                vec[k] = vec.get(k, 0) - x
            kernel.append({k: Fraction(x * dens[k]) for k, x in vec.items() if x})
    ker = Subspace(m.cols, SparseMatrix.from_columns(m.cols, kernel), check=False)
    img = Subspace(m.rows, m.select(cols=image_cols), check=False)
    img._ech = ech
    return Decomposition(ech.rank, ker, img)


def solve(m: SparseMatrix, rhs: SparseMatrix) -> SparseMatrix:
    """Return some ``x`` with ``m @ x == rhs``; raise if a column is unsolvable."""
    if rhs.rows != m.rows:
        raise LinAlgError("solve: row mismatch")
    ech = Echelon(m.rows)
    dens: dict[int, int] = {}
    for j in range(m.cols):
        col = m.column(j)
        if col:
            iv, dens[j] = _scaled_ints(col)
            ech.add(iv, {j: 1})
    out = {}
    for j in rhs.nonzero_columns():
        col = rhs.column(j)
        den = 1
        for v in col.values():
            den = den * v.denominator // gcd(den, v.denominator)
        iv = {r: int(v * den) for r, v in col.items()}
        rest, s, c = ech.reduce(iv, track=True)
        if rest:
            raise LinAlgError(f"solve: column {j} is not in the column space")
        out[j] = {k: Fraction(x * dens[k], s * den) for k, x in c.items() if x}
    return SparseMatrix(m.cols, rhs.cols, out)


# --------------------------------------------------------------------------
# homology


class Homology:
    """Homology of ``C_in --d_in--> C --d_out--> C_out`` at the middle term.

    ``reps`` holds one cycle per homology basis element; :meth:`coords`
    expresses cycles in that basis.
    """

    def __init__(self, ambient_dim: int, boundaries: Subspace, reps: SparseMatrix, ech: Echelon, nbound: int):
        self.ambient_dim = ambient_dim
        self.boundaries = boundaries
        self.reps = reps
        self._ech = ech
        self._nbound = nbound

    @property
    def dim(self) -> int:
        return self.reps.cols

    @property
    def cycle_basis(self) -> Subspace:
        return Subspace(self.ambient_dim, SparseMatrix.hstack([self.boundaries.basis, self.reps]), check=False)

    def is_cycle(self, vec: Mapping[int, Fraction]) -> bool:
        return self._ech.contains(vec)

    def coords(self, cycles: SparseMatrix) -> SparseMatrix:
        """Homology coordinates of the given cycle columns."""
        if cycles.rows != self.ambient_dim:
            raise LinAlgError("coords: dimension mismatch")
        out = {}
        for j in cycles.nonzero_columns():
            iv = _scaled_ints(cycles.column(j))
            vec, den = iv
            rest, s, c = self._ech.reduce(vec, track=True)
            if rest:
                raise ComplexError(f"column {j} is not a cycle")
            col = {k: Fraction(x, s * den) for k, x in c.items() if x}
            if col:
                out[j] = col
        return SparseMatrix(self.dim, cycles.cols, out)

    @property
    def projection(self) -> SparseMatrix:
        """Matrix taking a cycle (ambient coordinates) to homology coordinates.

        Defined on the whole ambient space by solving only on pivot rows; it
        agrees with :meth:`coords` on cycles and kills boundaries.
        """
        rows = {}
        piv = self._ech._piv
        # Triangular solve on pivot rows, one ambient basis vector at a time.
        for i in range(self.ambient_dim):
            v = {i: 1}
            s = 1
            combo: dict = {}
            while v:
                r = max(v)
                p = piv.get(r)
                if p is None:
                    del v[r]
                    continue
                w, wc = p
                a, b = w[r], v[r]
                g = gcd(a, b)
                a //= g
                b //= g
                if a < 0:
                    a, b = -a, -b
                if a != 1:
                    v = {k: a * x for k, x in v.items()}
                    s *= a
                    combo = {k: a * x for k, x in combo.items()}
                for k, x in w.items():
                    nv = v.get(k, 0) - b * x
                    if nv:
                        v[k] = nv
                    else:
                        del v[k]
                if wc:
                    for k, x in wc.items():
                        combo[k] = combo.get(k, 0) + b * x
            for k, x in combo.items():
                if x:
                    rows.setdefault(i, {})[k] = Fraction(x, s)
        return SparseMatrix(self.dim, self.ambient_dim, rows)

    def __repr__(self) -> str:
        return f"Homology(dim={self.dim}, ambient={self.ambient_dim})"


def _scaled_ints(col: Mapping[int, Fraction]) -> tuple[dict[int, int], int]:
    den = 1
    for v in col.values():
        d = v.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return {r: int(v * den) for r, v in col.items()}, den


def homology_at(d_in: SparseMatrix, d_out: SparseMatrix, *, check: bool = True) -> Homology:
    """Homology at the middle of ``d_in`` followed by ``d_out``.

    Raises :class:`ComplexError` if ``d_out @ d_in`` is nonzero.
    """
    if d_in.rows != d_out.cols:
        raise LinAlgError(f"incomposable differentials {d_in.shape} then {d_out.shape}")
    n = d_out.cols
    if check and not (d_out @ d_in).is_zero():
        raise ComplexError("d_out o d_in != 0")
    ech = Echelon(n)
    bound_cols = []
    for j in range(d_in.cols):
        col = d_in.column(j)
        if col and ech.add(_to_int_vector(col), {}):
            bound_cols.append(j)
    nbound = ech.rank
    boundaries = Subspace(n, d_in.select(cols=bound_cols), check=False)
    ker = decompose(d_out).kernel
    reps = []
    for j in range(ker.dim):
        v, _, _ = ech.reduce(_to_int_vector(ker.basis.column(j)))
        if v:
            h = len(reps)
            ech.insert_reduced(v, {h: 1})
            reps.append({k: Fraction(x) for k, x in v.items()})
    return Homology(n, boundaries, SparseMatrix.from_columns(n, reps), ech, nbound)


def induced_map(f: SparseMatrix, source: Homology, target: Homology) -> SparseMatrix:
    """Matrix of the map on homology induced by the chain-level map ``f``."""
    if f.cols != source.ambient_dim or f.rows != target.ambient_dim:
        raise LinAlgError("induced_map: shape mismatch")
    fb = f @ source.boundaries.basis
    for j in fb.nonzero_columns():
        if not target.boundaries.contains(fb.column(j)):
            raise ComplexError("map does not send boundaries to boundaries")
    return target.coords(f @ source.reps)


# --------------------------------------------------------------------------
# complexes and the snake lemma


@dataclass
class ChainComplex:
    """Finite chain complex: ``dims[n]`` and ``diff[n]: C_n -> C_{n-1}``.

    Degrees absent from ``dims`` are zero.  Missing differentials are zero.
    """

    dims: dict[int, int]
    diff: dict[int, SparseMatrix] = field(default_factory=dict)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> SparseMatrix:
        m = self.diff.get(n)
        if m is None:
            return SparseMatrix.zeros(self.dim(n - 1), self.dim(n))
        return m

    def validate(self) -> None:
        for n, m in self.diff.items():
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise ComplexError(f"differential in degree {n} has shape {m.shape}")
            nxt = self.diff.get(n - 1)
            if nxt is not None and not (nxt @ m).is_zero():
                raise ComplexError(f"d o d != 0 at degree {n}")

    def homology(self, n: int) -> Homology:
        return homology_at(self.d(n + 1), self.d(n))


@dataclass
class ShortExactSequence:
    """``0 -> sub --incl--> mid --proj--> quo -> 0`` degreewise."""

    sub: ChainComplex
    mid: ChainComplex
    quo: ChainComplex
    incl: dict[int, SparseMatrix]
    proj: dict[int, SparseMatrix]

    def _i(self, n):
        return self.incl.get(n) or SparseMatrix.zeros(self.mid.dim(n), self.sub.dim(n))

    def _p(self, n):
        return self.proj.get(n) or SparseMatrix.zeros(self.quo.dim(n), self.mid.dim(n))

    def validate(self, degrees: Iterable[int]) -> None:
        for n in degrees:
            i, p = self._i(n), self._p(n)
            if not (p @ i).is_zero():
                raise ComplexError(f"proj o incl != 0 in degree {n}")
            if rank(i) != self.sub.dim(n):
                raise ComplexError(f"inclusion not injective in degree {n}")
            rp = rank(p)
            if rp != self.quo.dim(n):
                raise ComplexError(f"projection not surjective in degree {n}")
            if self.sub.dim(n) + rp != self.mid.dim(n):
                raise ComplexError(f"sequence not exact in the middle in degree {n}")
            if self.mid.d(n) @ i != self._i(n - 1) @ self.sub.d(n):
                raise ComplexError(f"inclusion is not a chain map in degree {n}")
            if self.quo.d(n) @ p != self._p(n - 1) @ self.mid.d(n):
                raise ComplexError(f"projection is not a chain map in degree {n}")


def connecting_map(
    ses: ShortExactSequence,
    n: int,
    source: Homology | None = None,
    target: Homology | None = None,
    *,
    check: bool = True,
) -> SparseMatrix:
    """Snake-lemma boundary ``H_n(quo) -> H_{n-1}(sub)``.

    Precomputed homologies may be passed to fix the bases of both ends.
    """
    if check:
        ses.validate([n, n - 1])
    if source is None:
        source = ses.quo.homology(n)
    if target is None:
        target = ses.sub.homology(n - 1)
    if source.dim == 0 or target.dim == 0:
        return SparseMatrix.zeros(target.dim, source.dim)
    lifts = solve(ses._p(n), source.reps)
    dl = ses.mid.d(n) @ lifts
    pulled = solve(ses._i(n - 1), dl)
    return target.coords(pulled)


# --------------------------------------------------------------------------
# towers


@dataclass
class Tower:
    """Inverse system ``spaces[0] <- spaces[1] <- ...``.

    ``maps[i]`` sends ``spaces[i+1]`` to ``spaces[i]``.
    """

    spaces: list[int]
    maps: list[SparseMatrix]

    def __post_init__(self):
        if len(self.maps) != max(len(self.spaces) - 1, 0):
            raise LinAlgError("a tower with s stages needs s-1 maps")
        for i, m in enumerate(self.maps):
            if m.shape != (self.spaces[i], self.spaces[i + 1]):
                raise LinAlgError(f"tower map {i} has shape {m.shape}, expected {(self.spaces[i], self.spaces[i + 1])}")


@dataclass
class TowerLimit:
    status: str  # "stabilized" | "undetermined"
    lim_dim: int | None
    lim1_zero: bool | None
    image_dims: list[int]
    images: list[Subspace]
    reason: str = ""

    @property
    def stabilized(self) -> bool:
        return self.status == "stabilized"


def tower_limit(t: Tower, window: int = 3) -> TowerLimit:
    """Limit of a tower of finite-dimensional spaces via eventual images.

    ``Im_k`` is the image of the composite from the deepest stage into stage
    ``k``.  The tower counts as stabilized when ``dim Im_k`` agrees over the
    final ``window`` stages ``k = 0 .. window-1``; the maps between these
    images are then surjections of equal dimension, hence isomorphisms, so the
    image tower is Mittag-Leffler and its limit has that dimension.
    """
    if window < 1:
        raise LinAlgError("window must be positive")
    nst = len(t.spaces)
    if nst < window + 2:
        return TowerLimit("undetermined", None, None, [], [], f"need {window + 2} stages, have {nst}")
    deep = nst - 1
    comp = SparseMatrix.identity(t.spaces[deep])
    images: list[Subspace] = [None] * nst  # type: ignore[list-item]
    images[deep] = Subspace.whole(t.spaces[deep])
    for k in range(deep - 1, -1, -1):
        comp = t.maps[k] @ comp
        images[k] = Subspace.span(t.spaces[k], comp)
    dims = [s.dim for s in images]
    tail = dims[:window]
    if len(set(tail)) == 1:
        return TowerLimit("stabilized", tail[0], True, dims, images)
    return TowerLimit("undetermined", None, None, dims, images, f"eventual image dims {tail} not constant")
