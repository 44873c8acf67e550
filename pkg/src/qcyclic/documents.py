"""JSON input documents: algebras, split squares and simplicial or cyclic modules.

Rationals travel as strings ``"p/q"`` so nothing is rounded.  The structural
schema ships as ``data/schema.json``; example documents live in
``data/corpus``.  Every error names the offending entry as a JSON path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .algcore import Algebra, AlgebraError, AlgebraMap, Ideal, SplitSquare, split_square, validate_algebra
from .cyccat import (
    CyclicModule,
    MatrixCyclicModule,
    SimplicialModule,
    StructureError,
    dold_kan,
    validate_cyclic,
    validate_simplicial,
)
from .exactla import LinAlgError, SparseMatrix


class ParseError(ValueError):
    """Malformed or invalid input; ``location`` is a JSON path such as ``$.products["1*e"].e``."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass
class Loaded:
    kind: str
    name: str
    value: Algebra | SplitSquare | SimplicialModule | CyclicModule
    ideals: dict[str, Ideal] = field(default_factory=dict)


def _path(base: str, key: Any) -> str:
    if isinstance(key, int):
        return f"{base}[{key}]"
    if isinstance(key, str) and key.isidentifier():
        return f"{base}.{key}"
    return f"{base}[{json.dumps(key)}]"


def schema() -> dict:
    return json.loads(resources.files("qcyclic").joinpath("data/schema.json").read_text())


def corpus_names() -> list[str]:
    folder = resources.files("qcyclic").joinpath("data/corpus")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("qcyclic").joinpath(f"data/corpus/{name}.json")))


def resolve(source: str) -> Path:
    """A file path, or the name of a bundled corpus document."""
    p = Path(source)
    if p.exists():
        return p
    stem = source[:-5] if source.endswith(".json") else source
    if stem in corpus_names():
        return corpus_path(stem)
    raise FileNotFoundError(f"{source}: no such file or bundled example (bundled: {', '.join(corpus_names())})")


def rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(where, f"expected a rational string, got {value!r}")
    try:
        return Fraction(value)
    except ZeroDivisionError:
        raise ParseError(where, f"zero denominator in {value!r}") from None
    except ValueError:
        raise ParseError(where, f"malformed rational {value!r}") from None


def _vector(obj: dict, names: list[str], where: str) -> dict[int, Fraction]:
    index = {n: i for i, n in enumerate(names)}
    out = {}
    for key, val in obj.items():
        loc = _path(where, key)
        if key not in index:
            raise ParseError(loc, f"unknown basis element {key!r}")
        x = rational(val, loc)
        if x:
            out[index[key]] = x
    return out


def _matrix(rows: list, where: str, shape: tuple[int, int] | None = None) -> SparseMatrix:
    dense = [[rational(x, _path(_path(where, i), j)) for j, x in enumerate(row)] for i, row in enumerate(rows)]
    ncols = len(dense[0]) if dense else (shape[1] if shape else 0)
    if any(len(r) != ncols for r in dense):
        raise ParseError(where, "rows have different lengths")
    m = SparseMatrix.from_dense(dense) if dense else SparseMatrix.zeros(0, ncols)
    if shape is not None and m.shape != shape:
        raise ParseError(where, f"expected shape {shape}, got {m.shape}")
    return m


def _algebra(doc: dict, where: str) -> tuple[Algebra, dict[str, Ideal]]:
    names = list(doc["basis"])
    n = len(names)
    table = [[{} for _ in range(n)] for _ in range(n)]
    index = {x: i for i, x in enumerate(names)}
    for key, vec in doc["products"].items():
        loc = _path(_path(where, "products"), key)
        left, right = key.split("*")
        for side in (left, right):
            if side not in index:
                raise ParseError(loc, f"unknown basis element {side!r}")
        table[index[left]][index[right]] = _vector(vec, names, loc)
    unit = _vector(doc["unit"], names, _path(where, "unit"))
    a = Algebra(names, table, unit, name=doc.get("name", ""))
    report = validate_algebra(a)
    if not report:
        raise ParseError(where, f"not a unital associative algebra: {report.failure} at {report.witness}")
    ideals = {}
    for name, gens in doc.get("ideals", {}).items():
        loc = _path(_path(where, "ideals"), name)
        vecs = [_vector(g, names, _path(loc, i)) for i, g in enumerate(gens)]
        ideals[name] = Ideal.generated(a, vecs)
    return a, ideals


def _map(doc: dict, src: Algebra, dst: Algebra, where: str) -> tuple[AlgebraMap, SparseMatrix]:
    images = doc["images"]
    cols = []
    for name in src.basis_labels:
        if name not in images:
            raise ParseError(_path(where, "images"), f"missing image of {name!r}")
        cols.append(_vector(images[name], list(dst.basis_labels), _path(_path(where, "images"), name)))
    extra = set(images) - set(src.basis_labels)
    if extra:
        raise ParseError(_path(where, "images"), f"unknown basis element {sorted(extra)[0]!r}")
    try:
        f = AlgebraMap(src, dst, SparseMatrix.from_columns(dst.dim, cols))
    except AlgebraError as exc:
        raise ParseError(where, f"not an algebra map: {exc}") from None
    sec = doc["section"]
    scols = []
    for name in dst.basis_labels:
        if name not in sec:
            raise ParseError(_path(where, "section"), f"missing section value on {name!r}")
        scols.append(_vector(sec[name], list(src.basis_labels), _path(_path(where, "section"), name)))
    return f, SparseMatrix.from_columns(src.dim, scols)


def _split_key(key: str, where: str, parts: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise ParseError(where, f"bad index key {key!r}") from None
    if len(vals) != parts:
        raise ParseError(where, f"bad index key {key!r}")
    return vals


def _simplicial(doc: dict, where: str) -> SimplicialModule:
    ndim = list(doc["normalized"])
    bds = {}
    for key, rows in doc.get("boundaries", {}).items():
        loc = _path(_path(where, "boundaries"), key)
        (p,) = _split_key(key, loc, 1)
        if not 1 <= p < len(ndim):
            raise ParseError(loc, f"no boundary out of N_{p}")
        bds[p] = _matrix(rows, loc, (ndim[p - 1], ndim[p]))
    for p, m in bds.items():
        nxt = bds.get(p - 1)
        if nxt is not None and not (nxt @ m).is_zero():
            raise ParseError(_path(where, "boundaries"), f"boundaries out of N_{p} and N_{p - 1} do not compose to zero")
    m = dold_kan(ndim, bds, doc["max_degree"])
    report = validate_simplicial(m)
    if not report:
        raise ParseError(where, f"simplicial identity fails: {report.failure} in degree {report.degree}")
    return m


def _cyclic(doc: dict, where: str) -> CyclicModule:
    dims = list(doc["dims"])
    D = len(dims) - 1
    faces, degens, cyc = {}, {}, {}
    for key, rows in doc["faces"].items():
        loc = _path(_path(where, "faces"), key)
        q, i = _split_key(key, loc, 2)
        if not (1 <= q <= D and 0 <= i <= q):
            raise ParseError(loc, "face index out of range")
        faces[(q, i)] = _matrix(rows, loc, (dims[q - 1], dims[q]))
    for key, rows in doc["degeneracies"].items():
        loc = _path(_path(where, "degeneracies"), key)
        q, i = _split_key(key, loc, 2)
        if not (0 <= q < D and 0 <= i <= q):
            raise ParseError(loc, "degeneracy index out of range")
        degens[(q, i)] = _matrix(rows, loc, (dims[q + 1], dims[q]))
    for key, rows in doc["cyclic"].items():
        loc = _path(_path(where, "cyclic"), key)
        (q,) = _split_key(key, loc, 1)
        if not 0 <= q <= D:
            raise ParseError(loc, "degree out of range")
        cyc[q] = _matrix(rows, loc, (dims[q], dims[q]))
    for q in range(D + 1):
        for i in range(q + 1):
            if q >= 1 and (q, i) not in faces:
                raise ParseError(_path(where, "faces"), f"missing face \"{q},{i}\"")
            if q < D and (q, i) not in degens:
                raise ParseError(_path(where, "degeneracies"), f"missing degeneracy \"{q},{i}\"")
        if q not in cyc:
            raise ParseError(_path(where, "cyclic"), f"missing cyclic operator \"{q}\"")
    m = MatrixCyclicModule(dims, faces, degens, cyc)
    report = validate_cyclic(m)
    if not report:
        raise ParseError(where, f"cyclic identity fails: {report.failure} in degree {report.degree}")
    return m


def load_document(doc: Any) -> Loaded:
    """Validate a decoded JSON document and build its object."""
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        best = jsonschema.exceptions.best_match([exc]) or exc
        loc = "$"
        for key in best.absolute_path:
            loc = _path(loc, key)
        raise ParseError(loc, best.message) from None
    kind = doc["kind"]
    name = doc.get("name", "")
    try:
        if kind == "algebra":
            a, ideals = _algebra(doc, "$")
            return Loaded(kind, name, a, ideals)
        if kind == "square":
            a1, _ = _algebra(doc["A1"], "$.A1")
            a2, _ = _algebra(doc["A2"], "$.A2")
            a12, _ = _algebra(doc["A12"], "$.A12")
            f1, s1 = _map(doc["f1"], a1, a12, "$.f1")
            f2, s2 = _map(doc["f2"], a2, a12, "$.f2")
            try:
                sq = split_square(a1, a2, a12, f1, f2, s1, s2)
            except AlgebraError as exc:
                raise ParseError("$", str(exc)) from None
            return Loaded(kind, name, sq)
        if kind == "simplicial":
            return Loaded(kind, name, _simplicial(doc, "$"))
        return Loaded(kind, name, _cyclic(doc, "$"))
    except (LinAlgError, StructureError) as exc:
        raise ParseError("$", str(exc)) from None


def load(source: str | Path) -> Loaded:
    """Read a document from a path or a bundled corpus name."""
    path = resolve(str(source))
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return load_document(doc)


def parse_spec(source: str | Path) -> Algebra | SplitSquare | SimplicialModule | CyclicModule:
    return load(source).value


__all__ = ["Loaded", "ParseError", "corpus_names", "corpus_path", "load", "load_document", "parse_spec",
           "rational", "resolve", "schema"]
