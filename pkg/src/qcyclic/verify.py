"""Scenario verifiers: each turns a structural claim into exact computations and verdicts.

A verdict is ``pass``, ``fail`` or ``undetermined`` (with a reason).  Nothing
is reported outside the degrees a computation certifies.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from .algcore import (
    Algebra,
    Bimodule,
    Ideal,
    SplitSquare,
    associated_graded,
    quotient_by_ideal,
    rationals,
    split_square,
)
from .cychom import (
    CyclicHomology,
    HPReport,
    cp_window,
    hc_map,
    hp,
    hp_map,
    odd_column_acyclicity,
    row_acyclicity,
    restrict_to_images,
    sbi,
    total_map,
)
from .cyccat import (
    CyclicMorphism,
    SimplicialModule,
    StructureReport,
    check_morphism,
    constant_module,
    free_cyclic,
    random_simplicial_module,
    subquotient,
    validate_cyclic,
)
from .exactla import (
    ChainComplex,
    ComplexError,
    ShortExactSequence,
    SparseMatrix,
    connecting_map,
    rank,
    solve,
)
from .hhdecomp import (
    DEFAULT_BUDGET,
    gap_set,
    graded_comparison,
    hh,
    hh_map,
    ideal_filtration,
    partition_chain,
    partition_decompose,
    partitions,
    split_square_ifib,
    weight_decompose,
)

PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"
DEFAULT_SEED = 20240601


@dataclass
class Verdict:
    claim: str
    status: str
    detail: str = ""
    witness: Any = None


@dataclass
class ScenarioReport:
    scenario: str
    inputs: dict = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    certified: dict = field(default_factory=dict)
    seconds: float = 0.0
    seeds: list[int] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, claim: str, status: str | bool, detail: str = "", witness: Any = None) -> Verdict:
        if isinstance(status, bool):
            status = PASS if status else FAIL
        v = Verdict(claim, status, detail, witness)
        self.verdicts.append(v)
        return v

    def add_report(self, claim: str, report: StructureReport, detail: str = "") -> Verdict:
        if report.valid:
            return self.add(claim, PASS, detail)
        where = f" in degree {report.degree}" if report.degree is not None else ""
        return self.add(claim, FAIL, f"{report.failure}{where}", report.witness)

    def merge(self, other: "ScenarioReport", prefix: str) -> None:
        for v in other.verdicts:
            self.verdicts.append(Verdict(f"{prefix}: {v.claim}", v.status, v.detail, v.witness))
        self.seeds.extend(s for s in other.seeds if s not in self.seeds)

    @property
    def ok(self) -> bool:
        return all(v.status == PASS for v in self.verdicts)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, UNDETERMINED: 0}
        for v in self.verdicts:
            out[v.status] += 1
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        d["counts"] = self.counts()
        return _jsonable(d)

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario}"]
        if self.inputs:
            lines.append("inputs: " + ", ".join(f"{k}={v}" for k, v in self.inputs.items()))
        for v in self.verdicts:
            tail = f" ({v.detail})" if v.detail else ""
            wit = f" witness={v.witness}" if v.witness is not None else ""
            lines.append(f"  [{v.status.upper():>12}] {v.claim}{tail}{wit}")
        if self.certified:
            lines.append("certified: " + "; ".join(f"{k}: {v}" for k, v in self.certified.items()))
        if self.seeds:
            lines.append(f"seeds: {self.seeds}")
        c = self.counts()
        lines.append(f"{c[PASS]} pass, {c[FAIL]} fail, {c[UNDETERMINED]} undetermined in {self.seconds:.2f}s")
        return "\n".join(lines)


def _jsonable(x):
    from fractions import Fraction

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


class _Timer:
    def __init__(self, report: ScenarioReport):
        self.report = report

    def __enter__(self):
        self.t = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds = time.perf_counter() - self.t
        return False


def tower_degree(window: int) -> int:
    """Smallest max degree giving ``window + 2`` stages in both parity towers."""
    return 2 * window + 3


# --------------------------------------------------------------------------
# HP helpers


def _tower_summary(rep: HPReport) -> dict:
    out = {}
    for p, t in rep.towers.items():
        out[p] = {
            "hc_degrees": t.degrees,
            "top_s_image_from": t.top_degree,
            "stage_dims": None if t.tower is None else t.tower.spaces,
            "image_dims": None if t.limit is None else t.limit.image_dims,
            "status": rep.status(p),
            "dim": rep.dim(p),
            "reason": t.reason,
        }
    return out


def _certified_hp(rep: HPReport) -> str:
    degs = rep.certified_degrees
    if not degs:
        return "none"
    return f"HC_{min(degs)}..HC_{max(degs)} plus S-images from degree {max(t.top_degree or 0 for t in rep.towers.values())}"


# --------------------------------------------------------------------------
# nilpotent invariance


def check_nilpotent_invariance(a: Algebra, i: Ideal, max_degree: int = 6, window: int = 3,
                               hp_degree: int | None = None, max_weight: int = 4,
                               budget: int = DEFAULT_BUDGET) -> ScenarioReport:
    """``HP(A) -> HP(A/I)`` is an isomorphism, plus the filtration argument behind it.

    ``max_degree`` bounds the chain-level checks; the HP towers use
    ``hp_degree`` (default ``2 * window + 3``).  The partition chains are
    replayed for weights ``1 .. max_weight``.
    """
    hp_degree = tower_degree(window) if hp_degree is None else hp_degree
    rep = ScenarioReport("nilpotent invariance", {"algebra": a.name or f"dim {a.dim}", "ideal dim": i.dim,
                                                   "max_degree": max_degree, "hp_degree": hp_degree,
                                                   "window": window})
    with _Timer(rep):
        b, phi = quotient_by_ideal(a, i)
        ma, mb = hh(a, hp_degree, budget=budget), hh(b, hp_degree, budget=budget)
        ra, rb = hp(ma, window), hp(mb, window)
        rep.data["hp_source"] = _tower_summary(ra)
        rep.data["hp_target"] = _tower_summary(rb)
        rep.certified["HP towers"] = _certified_hp(ra)
        stabilized = all(r.status(p) == "stabilized" for r in (ra, rb) for p in (0, 1))
        if not stabilized:
            reasons = "; ".join(f"parity {p}: {r.towers[p].reason}" for r in (ra, rb) for p in (0, 1)
                                if r.status(p) != "stabilized")
            rep.add("HP(A) -> HP(A/I) is an isomorphism", UNDETERMINED, f"towers not stabilized ({reasons})")
        else:
            f = hh_map(phi, ma, mb, max_degree=1)
            m = hp_map(f, ra, rb)
            for p in (0, 1):
                rep.add(f"HP_{p}(A) -> HP_{p}(A/I) is an isomorphism", m.iso(p),
                        f"dims {m.src_dims[p]} -> {m.dst_dims[p]}, rank {m.ranks[p]}",
                        None if m.iso(p) else {"parity": p, "rank": m.ranks[p]})
            rep.data["hp_dims"] = {p: ra.dim(p) for p in (0, 1)}

        if i.dim == 0:
            rep.add("filtration argument", PASS, "zero ideal: F^1 = 0, nothing to replay")
            return rep
        filt = ideal_filtration(a, i, max_degree, budget=budget)
        n = filt.nilpotency
        rep.certified["filtration"] = f"degrees 0..{max_degree}"
        rep.add_report(f"F^k_q = 0 for k >= {n}(q+1), q <= {max_degree}", filt.vanishing())
        rep.add_report("F^0/F^1 = HH(A/I) as cyclic modules", filt.quotient_comparison())
        gr = associated_graded(a, i)
        top_weight = min(max_weight, n * (max_degree + 1) - 1)
        rep.certified["partition chains"] = f"weights 1..{top_weight}"
        for k in range(1, top_weight + 1):
            rep.add_report(f"F^{k}/F^{k + 1}(A, I) = F^{k}/F^{k + 1}(gr(A, I))", graded_comparison(filt, k))
            chain = partition_chain(gr, k, max_degree, budget=budget)
            rep.add_report(f"weight {k}: structure maps never lower the partition norm", chain.flow)
            rep.add_report(f"weight {k}: surjection chain of length {len(chain.stages)} ends at 0 with exact steps",
                           chain.audit)
            for st in chain.stages:
                r = st.retract
                report = r.to_free.report if not r.to_free.valid else (r.composite if not r.composite.valid
                                                                        else r.base_closed)
                rep.add_report(f"weight {k}: H{st.partition} -> j_*G -> H{st.partition} is {r.scalar}·id", report)
    return rep


# --------------------------------------------------------------------------
# Mayer-Vietoris for split squares


def _label_selector(mod, pred):
    def sel(q):
        labels = mod.labels(q)
        return [j for j, lab in enumerate(labels) if pred(lab)], [j for j, lab in enumerate(labels) if not pred(lab)]
    return sel


def _sub_selector(mod, pred):
    def sel(q):
        return [j for j, lab in enumerate(mod.labels(q)) if pred(lab)], []
    return sel


def _iso_between(mat: SparseMatrix) -> bool:
    return mat.rows == mat.cols and rank(mat) == mat.rows


def _exact_node(rep: ScenarioReport, where: str, fin: SparseMatrix, fout: SparseMatrix, dim: int) -> None:
    comp_zero = (fout @ fin).is_zero() if fin.cols and fout.rows and dim else True
    rin, rout = rank(fin), rank(fout)
    ok = comp_zero and rin + rout == dim
    rep.add(f"exact at {where}", ok, f"dim {dim}, rank in {rin}, rank out {rout}",
            None if ok else {"composite_zero": comp_zero, "dim": dim, "rank_in": rin, "rank_out": rout})


def check_mayer_vietoris(s: SplitSquare, max_degree: int = 6, window: int = 3, hp_degree: int | None = None,
                         budget: int = DEFAULT_BUDGET) -> ScenarioReport:
    """Rank-exactness of ``HP(A0) -> HP(A1) ⊕ HP(A2) -> HP(A12) -> HP_{*-1}(A0)``.

    The boundary is the connecting map of ``0 -> P -> HH(A1) ⊕ HH(A2) ->
    HH(A12) -> 0`` with ``P = HH(A0)/ifib``, moved to ``A0`` through the
    isomorphism ``HP(A0) -> HP(P)``, which holds because ``HP(ifib) = 0``.
    Each ``HP`` is represented by the eventual image at the base stage of
    its tower.
    """
    hp_degree = tower_degree(window) if hp_degree is None else hp_degree
    rep = ScenarioReport("Mayer-Vietoris", {"square": s.corner.name, "dims": [s.corner.dim, s.a1.dim, s.a2.dim,
                                                                               s.a12.dim],
                                            "max_degree": max_degree, "hp_degree": hp_degree, "window": window})
    with _Timer(rep):
        rep.add("dim A0 = dim A1 + dim A2 - dim A12", s.corner.dim == s.a1.dim + s.a2.dim - s.a12.dim)
        f1pr = (s.f1 @ s.pr1).matrix == (s.f2 @ s.pr2).matrix
        rep.add("f1 pr1 = f2 pr2", f1pr)

        # iterated fiber at chain level
        ifib = split_square_ifib(s, max_degree, budget=budget)
        rep.certified["iterated fiber"] = f"degrees 0..{max_degree}"
        rep.add_report("ifib: kernel of HH(A0) -> HH(A1) ⊕ HH(A2) = labelled sum", ifib.agreement)
        rep.add_report("ifib: dims of H(k) add up", ifib.audit)
        for k, piece in ifib.pieces.items():
            r = piece.retract
            report = r.to_free.report if not r.to_free.valid else (r.composite if not r.composite.valid
                                                                    else r.base_closed)
            rep.add_report(f"ifib: H({k}) -> j_*G({k}) -> H({k}) is {k}·id", report)

        # towers
        m0 = hh(s.corner, hp_degree, budget=budget, letter_labels=s.labels)
        m1, m2, m12 = (hh(x, hp_degree, budget=budget) for x in (s.a1, s.a2, s.a12))

        def both(lab):
            return 1 in lab and 2 in lab

        P = subquotient(m0, _label_selector(m0, lambda lab: not both(lab)), name="HH(A0)/ifib")
        K = subquotient(m0, _sub_selector(m0, both), name="ifib")
        eng = {name: CyclicHomology(m) for name, m in
               (("A0", m0), ("A1", m1), ("A2", m2), ("A12", m12), ("P", P), ("K", K))}
        reps = {name: hp(e.m, window, e) for name, e in eng.items()}
        rep.data["hp"] = {name: _tower_summary(r) for name, r in reps.items()}
        rep.certified["HP towers"] = _certified_hp(reps["A0"])

        kr = reps["K"]
        if all(kr.status(p) == "stabilized" for p in (0, 1)):
            rep.add("HP(ifib) = 0", kr.dim(0) == 0 and kr.dim(1) == 0, f"dims {kr.dim(0)}, {kr.dim(1)}")
        else:
            rep.add("HP(ifib) = 0", UNDETERMINED, "ifib towers not stabilized")

        if not all(r.status(p) == "stabilized" for r in reps.values() for p in (0, 1)):
            bad = [f"{n} parity {p}" for n, r in reps.items() for p in (0, 1) if r.status(p) != "stabilized"]
            rep.add("HP sequence exact", UNDETERMINED, "unstabilized towers: " + ", ".join(bad))
            return rep

        Dm = 3  # chain maps are only needed up to total degree 3
        pr1 = hh_map(s.pr1, m0, m1, Dm)
        pr2 = hh_map(s.pr2, m0, m2, Dm)
        f1 = hh_map(s.f1, m1, m12, Dm)
        f2 = hh_map(s.f2, m2, m12, Dm)
        pP1 = CyclicMorphism(P, m1, {q: pr1.maps[q] @ P.inclusion(q) for q in range(Dm + 1)})
        pP2 = CyclicMorphism(P, m2, {q: pr2.maps[q] @ P.inclusion(q) for q in range(Dm + 1)})
        piP = CyclicMorphism(m0, P, {q: P.projection(q) for q in range(Dm + 1)})
        for name, f in (("HH(A0) -> HH(A0)/ifib", piP), ("HH(A0)/ifib -> HH(A1)", pP1),
                        ("HH(A0)/ifib -> HH(A2)", pP2)):
            rep.add_report(f"{name} is a cyclic map (degrees <= {Dm})", check_morphism(f, Dm))

        def img(name, p):
            return reps[name].towers[p].image(0)

        def on_images(f, src, dst, p, stage=0):
            n = reps[src].towers[p].degrees[stage]
            m = hc_map(f, eng[src], eng[dst], n)
            return restrict_to_images(m, reps[src].towers[p].image(stage), reps[dst].towers[p].image(stage))

        alpha, beta, pi, delta = {}, {}, {}, {}
        for p in (0, 1):
            pi[p] = on_images(piP, "A0", "P", p)
            rep.add(f"HP_{p}(A0) -> HP_{p}(HH(A0)/ifib) is an isomorphism", _iso_between(pi[p]),
                    f"{pi[p].cols} -> {pi[p].rows}, rank {rank(pi[p])}")
            alpha[p] = SparseMatrix.vstack([on_images(pr1, "A0", "A1", p), on_images(pr2, "A0", "A2", p)])
            beta[p] = SparseMatrix.hstack([on_images(f1, "A1", "A12", p), -on_images(f2, "A2", "A12", p)])

        # boundary HC_n(A12) -> HC_{n-1}(P) via the snake lemma on total complexes
        for p in (0, 1):
            stage = 1 if p == 0 else 0  # lowest stage of positive degree
            n = reps["A12"].towers[p].degrees[stage]
            e12, eP, e1, e2 = eng["A12"], eng["P"], eng["A1"], eng["A2"]
            degs = [n + 1, n, n - 1]
            sub = eP.cc.chain_complex(degs)
            quo = e12.cc.chain_complex(degs)
            mid_dims = {k: e1.cc.dim(k) + e2.cc.dim(k) for k in range(n - 2, n + 2)}
            mid = ChainComplex(mid_dims, {k: SparseMatrix.block_diag([e1.cc.d(k), e2.cc.d(k)]) for k in degs})
            incl = {k: SparseMatrix.vstack([total_map(pP1, eP.cc, e1.cc, k), total_map(pP2, eP.cc, e2.cc, k)])
                    for k in range(n - 1, n + 1)}
            proj = {k: SparseMatrix.hstack([total_map(f1, e1.cc, e12.cc, k), -total_map(f2, e2.cc, e12.cc, k)])
                    for k in range(n - 1, n + 1)}
            ses = ShortExactSequence(sub, mid, quo, incl, proj)
            try:
                d = connecting_map(ses, n, e12.hc(n), eP.hc(n - 1))
            except ComplexError as exc:
                rep.add(f"0 -> P -> HH(A1)+HH(A2) -> HH(A12) -> 0 exact in total degrees {n - 1}, {n}", FAIL, str(exc))
                return rep
            rep.add(f"0 -> P -> HH(A1)+HH(A2) -> HH(A12) -> 0 exact in total degrees {n - 1}, {n}", PASS)
            q = 1 - p
            src_img = reps["A12"].towers[p].image(stage)
            d_img = restrict_to_images(d, src_img, reps["P"].towers[q].image(0))
            if stage:
                shift = restrict_to_images(e12.S(n), src_img, reps["A12"].towers[p].image(0))
                if not _iso_between(shift):
                    rep.add(f"S restricted to eventual images of HC(A12) in parity {p}", FAIL)
                    return rep
                d_img = d_img @ solve(shift, SparseMatrix.identity(shift.rows))
            # transport into A0 through pi
            if pi[q].rows:
                delta[p] = solve(pi[q], d_img) if _iso_between(pi[q]) else None
            else:
                delta[p] = SparseMatrix.zeros(0, d_img.cols)
        if any(v is None for v in delta.values()):
            rep.add("HP sequence exact", UNDETERMINED, "HP(A0) -> HP(P) is not invertible")
            return rep

        for p in (0, 1):
            q = 1 - p
            d0 = img("A0", p).dim
            dsum = img("A1", p).dim + img("A2", p).dim
            d12 = img("A12", p).dim
            _exact_node(rep, f"HP_{p}(A0)", delta[q], alpha[p], d0)
            _exact_node(rep, f"HP_{p}(A1) ⊕ HP_{p}(A2)", alpha[p], beta[p], dsum)
            _exact_node(rep, f"HP_{p}(A12)", beta[p], delta[p], d12)
        rep.data["hp_dims"] = {name: {p: r.dim(p) for p in (0, 1)} for name, r in reps.items()}
    return rep


# --------------------------------------------------------------------------
# free cyclic vanishing


def check_free_vanishing(n: SimplicialModule, window: int = 3,
                         extension: Callable[[int], SimplicialModule] | None = None,
                         name: str = "") -> ScenarioReport:
    """For ``j_*N``: ``HH -> HC`` onto, ``S = 0``, and ``HP = 0`` as separate verdicts.

    The first two are checked in every certified degree of ``N``.  ``HP``
    needs ``2 * window + 3`` degrees; a shallower ``N`` is continued by
    ``extension(degree)`` when given, otherwise that verdict is undetermined.
    """
    D = n.max_degree
    rep = ScenarioReport("free cyclic vanishing", {"module": name or f"dims {n.dims}", "max_degree": D,
                                                    "window": window})
    with _Timer(rep):
        jn = free_cyclic(n)
        rep.add_report("j_*N is a cyclic module", validate_cyclic(jn))
        e = CyclicHomology(jn)
        top = D - 1
        rep.certified["HH, HC"] = f"degrees 0..{top}"
        onto = [(k, rank(e.I(k)), e.hc(k).dim) for k in range(top + 1)]
        bad = [x for x in onto if x[1] != x[2]]
        rep.add(f"HH_n(j_*N) -> HC_n(j_*N) surjective for n <= {top}", not bad,
                witness=None if not bad else {"degree": bad[0][0], "rank": bad[0][1], "dim HC": bad[0][2]})
        nonzero = [k for k in range(top + 1) if not e.S(k).is_zero()]
        rep.add(f"S = 0 on HC_n(j_*N) for n <= {top}", not nonzero,
                witness=None if not nonzero else {"degree": nonzero[0]})
        need = tower_degree(window)
        deep = n if D >= need else (extension(need) if extension else None)
        if deep is None:
            rep.add("HP(j_*N) = 0", UNDETERMINED, f"needs max degree {need}, have {D} and no extension")
        else:
            if deep is not n:
                rep.certified["HP"] = f"computed on the continuation to degree {deep.max_degree}"
            r = hp(free_cyclic(deep), window)
            if all(r.status(p) == "stabilized" for p in (0, 1)):
                rep.add("HP(j_*N) = 0", r.dim(0) == 0 and r.dim(1) == 0, f"dims {r.dim(0)}, {r.dim(1)}")
            else:
                rep.add("HP(j_*N) = 0", UNDETERMINED, "towers not stabilized")
            rep.data["hp"] = _tower_summary(r)
    return rep


def random_free_suite(count: int = 20, max_degree: int = 5, dim_cap: int = 2, window: int = 3,
                      seed: int = DEFAULT_SEED) -> ScenarioReport:
    """``check_free_vanishing`` on seeded random ``N`` with ``dim N_q <= dim_cap``."""
    rep = ScenarioReport("random free cyclic vanishing", {"count": count, "max_degree": max_degree,
                                                           "dim_cap": dim_cap, "seed": seed})
    rep.seeds.append(seed)
    with _Timer(rep):
        master = random.Random(seed)
        for j in range(count):
            s = master.randrange(2 ** 32)
            deep, ndim = random_simplicial_module(random.Random(s), max_degree, dim_cap,
                                                  extend_to=tower_degree(window))
            sub = check_free_vanishing(deep.restrict(max_degree), window, lambda d, deep=deep: deep.restrict(d),
                                       name=f"seed {s}, N dims {ndim}")
            rep.merge(sub, f"#{j} (seed {s}, N dims {ndim})")
    return rep


# --------------------------------------------------------------------------
# structural lemma suite


def _retract_report(r) -> StructureReport:
    if not r.to_free.valid:
        return r.to_free.report
    if not r.composite.valid:
        return r.composite
    return r.base_closed


def dual_numbers_square() -> SplitSquare:
    from .algcore import AlgebraMap, dual_numbers

    a1, a2, q = dual_numbers("e"), dual_numbers("d"), rationals()
    f1 = AlgebraMap(a1, q, SparseMatrix.from_dense([[1, 0]]))
    f2 = AlgebraMap(a2, q, SparseMatrix.from_dense([[1, 0]]))
    sec = SparseMatrix.from_dense([[1], [0]])
    return split_square(a1, a2, q, f1, f2, sec, sec)


GAP_TABLE = (
    ((2, 2, 0, 1, 2, 1, 1, 0, 2, 0, 1), (0, 4, 8)),
    ((2, 2, 0, 1, 2, 1, 1, 0, 2, 0, 2), (4, 8)),
)
PARTITION_ORDER_4 = "(4)>(3+1)>(2+2)>(2+1+1)>(1+1+1+1)"
PARTITION_NORMS_4 = (256, 208, 160, 148, 85)


def partition_order_line(k: int) -> str:
    return ">".join(str(p) for p in partitions(k))


def run_lemma_suite(max_degree: int = 6, budget: int = DEFAULT_BUDGET) -> ScenarioReport:
    """Partition order, gap sets, and every retract composite of the bundled examples."""
    D = max_degree
    rep = ScenarioReport("lemma suite", {"max_degree": D})
    with _Timer(rep):
        ps = partitions(4)
        line = partition_order_line(4)
        rep.add("partition order for k = 4", line == PARTITION_ORDER_4, line)
        norms = tuple(p.norm for p in ps)
        rep.add("partition norms for k = 4", norms == PARTITION_NORMS_4, str(norms))
        for f, expected in GAP_TABLE:
            got = tuple(sorted(gap_set(f).members))
            rep.add(f"gap set of {''.join(map(str, f))}", got == expected, "{" + ", ".join(map(str, got)) + "}")

        q = rationals()
        wd = weight_decompose(q, Bimodule.regular(q), D, budget=budget)
        rep.add_report("Q ⋉ Q: weight pieces add up", wd.audit)
        for piece in wd.pieces[1:5]:
            r = piece.retract
            rep.add_report(f"Q ⋉ Q: H({piece.k}) -> j_*G({piece.k}) -> H({piece.k}) is {r.scalar}·id",
                           _retract_report(r))
        for k in range(1, 4):
            for P in partitions(k):
                _, pc = partition_decompose(q, [Bimodule.regular(q)] * 2, P, D, budget=budget)
                r = pc.retract
                rep.add_report(f"Q ⋉ (Q ⊕ Q): H{P} -> j_*G{P} -> H{P} is {r.scalar}·id", _retract_report(r))
        ifib = split_square_ifib(dual_numbers_square(), D, budget=budget)
        rep.add_report("split square: ifib computed two ways agrees", ifib.agreement)
        for k, piece in ifib.pieces.items():
            rep.add_report(f"split square: H({k}) -> j_*G({k}) -> H({k}) is {k}·id", _retract_report(piece.retract))
        rep.certified["retracts"] = f"degrees 0..{D}"
    return rep


# --------------------------------------------------------------------------
# structural property suite


def structural_suite(max_degree: int = 6) -> ScenarioReport:
    """D² = 0, cyclic identities, decomposition audits and SBI exactness on the small examples."""
    from .algcore import dual_numbers, truncated_polynomial

    D = max_degree
    rep = ScenarioReport("structural properties", {"max_degree": D})
    with _Timer(rep):
        mods = {
            "hh(Q)": hh(rationals(), D),
            "hh(Q[e])": hh(dual_numbers(), D),
            "hh(Q[x]/x^3)": hh(truncated_polynomial(3)[0], D),
            "constant Q": constant_module(D),
            "j_*(constant Q)": free_cyclic(constant_module(D)),
        }
        for name, m in mods.items():
            rep.add_report(f"{name}: cyclic identities", validate_cyclic(m))
            try:
                cp_window(m, -2, D + 1)
                rep.add(f"{name}: D∘D = 0 on columns -2..{D + 1}", PASS)
            except ComplexError as exc:
                rep.add(f"{name}: D∘D = 0 on columns -2..{D + 1}", FAIL, str(exc))
            acyc = odd_column_acyclicity(m)
            rep.add(f"{name}: odd columns acyclic in degrees 0..{D - 1}", not any(acyc), str(acyc))
            rows = row_acyclicity(m)
            rep.add(f"{name}: rows acyclic in degrees 0..{D}", not any(a or b for a, b in rows), str(rows))
        for name in ("hh(Q)", "hh(Q[e])"):
            s = sbi(mods[name])
            bad = [n.where for n in s.nodes if not n.exact]
            rep.add(f"{name}: SBI rank-exact at all {len(s.nodes)} certified nodes", not bad,
                    witness=bad[0] if bad else None)
        q = rationals()
        rep.add_report("Q ⋉ Q weight audit", weight_decompose(q, Bimodule.regular(q), D).audit)
        a, i = truncated_polynomial(3)
        gr = associated_graded(a, i)
        for k in range(1, 4):
            rep.add_report(f"Q[x]/x^3 partition chain audit, weight {k}", partition_chain(gr, k, D).audit)
        rep.add_report("split square ifib audit", split_square_ifib(dual_numbers_square(), D).audit)
        rep.certified["modules"] = f"degrees 0..{D}; homology 0..{D - 1}"
    return rep


__all__ = [
    "DEFAULT_SEED",
    "FAIL",
    "GAP_TABLE",
    "PASS",
    "PARTITION_NORMS_4",
    "PARTITION_ORDER_4",
    "ScenarioReport",
    "UNDETERMINED",
    "Verdict",
    "check_free_vanishing",
    "check_mayer_vietoris",
    "check_nilpotent_invariance",
    "dual_numbers_square",
    "partition_order_line",
    "random_free_suite",
    "run_lemma_suite",
    "structural_suite",
    "tower_degree",
]
