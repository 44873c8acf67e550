"""Command-line entry point ``qcyclic``.

Inputs are JSON documents (see ``qcyclic schema``) or names of bundled
examples (``qcyclic corpus``).  The exit status is 0 exactly when every
verdict of the command passed; commands that only compute numbers exit 0.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algcore import Algebra, Bimodule, Ideal, SplitSquare
from .cychom import CyclicHomology, hc_minus, hp, sbi
from .cyccat import CyclicModule, SimplicialModule
from .exactla import LinAlgError, rank
from .hhdecomp import (
    BudgetError,
    DEFAULT_BUDGET,
    gap_set,
    hh,
    ideal_filtration,
    partition_decompose,
    partitions,
    weight_decompose,
)
from .documents import ParseError, corpus_names, load, schema
from .verify import (
    DEFAULT_SEED,
    FAIL,
    PASS,
    UNDETERMINED,
    ScenarioReport,
    check_free_vanishing,
    check_mayer_vietoris,
    check_nilpotent_invariance,
    random_free_suite,
    run_lemma_suite,
    structural_suite,
    tower_degree,
)

CHAIN_DEFAULT = 6


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-degree", type=int, default=None,
                   help=f"truncation degree D (default {CHAIN_DEFAULT}; HP towers default to 2*window+3)")
    p.add_argument("--window", type=int, default=3, help="stabilization window of S-towers (default 3)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on n^(D+1) tensor words")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized suites")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="qcyclic", description="Exact Hochschild and cyclic homology over Q.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (("hh", "Hochschild homology dims"), ("hc", "cyclic homology dims and S ranks"),
                           ("hp", "periodic cyclic homology via S-towers"), ("sbi", "SBI sequence exactness"),
                           ("hcminus", "negative cyclic homology via column windows")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source", help="JSON file or bundled example name")
        if name == "hcminus":
            p.add_argument("--degrees", default="-4:3", help="range lo:hi (half-open), default -4:3")

    dec = sub.add_parser("decompose", help="weight, partition or filtration decompositions")
    dsub = dec.add_subparsers(dest="kind", required=True)
    p = dsub.add_parser("weights", parents=[common], help="H(k) pieces of B ⋉ B with retract checks")
    p.add_argument("source")
    p = dsub.add_parser("partitions", parents=[common], help="H(P) pieces of B ⋉ (B ⊕ .. ⊕ B)")
    p.add_argument("source")
    p.add_argument("--slots", type=int, default=2, help="number l of bimodule summands (default 2)")
    p.add_argument("--k", type=int, default=3, help="partitions of every weight 1..k (default 3)")
    p = dsub.add_parser("filtration", parents=[common], help="dims of F^k and the vanishing bound")
    p.add_argument("source")
    p.add_argument("--ideal", required=True, help="name of an ideal in the document")

    p = sub.add_parser("gapset", parents=[common], help="gap set A_f of f: Z/(q+1) -> {0,1,2}")
    p.add_argument("values", nargs="+", help="values as digits, e.g. 22012110201 or 2 2 0 1 ..")
    p = sub.add_parser("partitions", parents=[common], help="partitions of k by decreasing norm")
    p.add_argument("k", type=int)

    chk = sub.add_parser("check", help="scenario verifiers")
    csub = chk.add_subparsers(dest="scenario", required=True)
    p = csub.add_parser("nilpotent", parents=[common], help="HP(A) -> HP(A/I) iso and the filtration argument")
    p.add_argument("source")
    p.add_argument("--ideal", required=True)
    p.add_argument("--hp-degree", type=int, default=None, help="truncation for HP towers (default 2*window+3)")
    p.add_argument("--max-weight", type=int, default=4)
    p = csub.add_parser("mv", parents=[common], help="Mayer-Vietoris for a split square")
    p.add_argument("source")
    p.add_argument("--hp-degree", type=int, default=None)
    p = csub.add_parser("free", parents=[common], help="HH->HC onto, S=0, HP=0 for j_*N")
    p.add_argument("source", nargs="?", help="simplicial document (omit with --random)")
    p.add_argument("--random", type=int, default=0, metavar="COUNT", help="seeded random N instead")

    sub.add_parser("suite", parents=[common], help="lemma suite and structural property suite")
    sub.add_parser("corpus", parents=[common], help="list bundled example documents")
    sub.add_parser("schema", parents=[common], help="print the input JSON schema")
    return ap


# --------------------------------------------------------------------------


def _module(source: str, D: int, budget: int) -> tuple[CyclicModule, str]:
    doc = load(source)
    if isinstance(doc.value, Algebra):
        return hh(doc.value, D, budget=budget), f"hh({doc.name or source})"
    if isinstance(doc.value, CyclicModule):
        m = doc.value
        return (m.restrict(D) if m.max_degree > D else m), doc.name or source
    if isinstance(doc.value, SimplicialModule):
        raise UsageError("a simplicial document has no cyclic structure; use `check free`")
    raise UsageError("expected an algebra or a cyclic module document")


def _algebra_doc(source: str):
    doc = load(source)
    if not isinstance(doc.value, Algebra):
        raise UsageError(f"{source} is not an algebra document")
    return doc


def _ideal(doc, name: str) -> Ideal:
    if name not in doc.ideals:
        raise UsageError(f"no ideal named {name!r} (available: {', '.join(doc.ideals) or 'none'})")
    return doc.ideals[name]


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _emit_report(args, rep: ScenarioReport) -> int:
    _emit(args, rep.to_dict(), rep.to_text())
    return 0 if rep.ok else 1


def cmd_hh(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    m, name = _module(args.source, D, args.budget)
    e = CyclicHomology(m)
    dims = [e.hh(n).dim for n in range(D)]
    _emit(args, {"module": name, "max_degree": D, "certified": [0, D - 1], "HH": dims},
          f"{name}, D={D}, certified degrees 0..{D - 1}\nHH: {dims}")
    return 0


def cmd_hc(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    m, name = _module(args.source, D, args.budget)
    e = CyclicHomology(m)
    dims = [e.hc(n).dim for n in range(D)]
    ranks = [rank(e.S(n)) for n in range(D)]
    _emit(args, {"module": name, "max_degree": D, "certified": [0, D - 1], "HC": dims, "S_rank": ranks},
          f"{name}, D={D}, certified degrees 0..{D - 1}\nHC: {dims}\nrank S: HC_n -> HC_(n-2): {ranks}")
    return 0


def cmd_hp(args) -> int:
    D = args.max_degree or tower_degree(args.window)
    m, name = _module(args.source, D, args.budget)
    r = hp(m, args.window)
    rep = ScenarioReport("periodic cyclic homology", {"module": name, "max_degree": D, "window": args.window})
    for p in (0, 1):
        t = r.towers[p]
        if r.status(p) == "stabilized":
            rep.add(f"HP_{p} determined", PASS, f"dim {r.dim(p)}, lim^1 = 0, eventual images {t.limit.image_dims}")
        else:
            rep.add(f"HP_{p} determined", UNDETERMINED,
                    t.reason or f"the parity {1 - p} tower (lim^1) did not stabilize")
        rep.data[f"HP_{p}"] = r.dim(p)
        rep.data[f"tower_{p}"] = {"hc_degrees": t.degrees, "top_s_image_from": t.top_degree,
                                  "stage_dims": None if t.tower is None else t.tower.spaces}
    rep.certified["towers"] = f"HC degrees {r.certified_degrees}"
    text = rep.to_text() + f"\nHP_even = {r.dim(0)}, HP_odd = {r.dim(1)}"
    _emit(args, rep.to_dict(), text)
    return 0 if rep.ok else 1


def cmd_sbi(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    m, name = _module(args.source, D, args.budget)
    s = sbi(m)
    rep = ScenarioReport("SBI sequence", {"module": name, "max_degree": D})
    for node in s.nodes:
        rep.add(f"exact at {node.where}", node.exact,
                f"{node.incoming} rank {node.rank_in}; {node.outgoing} rank {node.rank_out}; dim {node.dim}")
    rep.data = {"HH": s.hh_dims, "HC": s.hc_dims}
    rep.certified["nodes"] = f"degrees 0..{D - 1}"
    text = rep.to_text() + f"\nHH: {list(s.hh_dims.values())}\nHC: {list(s.hc_dims.values())}"
    _emit(args, rep.to_dict(), text)
    return 0 if rep.ok else 1


def cmd_hcminus(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    m, name = _module(args.source, D, args.budget)
    lo, hi = (int(x) for x in args.degrees.split(":"))
    rep = ScenarioReport("negative cyclic homology", {"module": name, "max_degree": D, "window": args.window})
    for n in range(lo, hi):
        res = hc_minus(m, n, args.window)
        if res.certified:
            rep.add(f"HC^-_{n} determined", PASS, f"dim {res.dim}, window stages {res.stage_dims}")
        else:
            rep.add(f"HC^-_{n} determined", UNDETERMINED, res.reason)
        rep.data[n] = res.dim
    _emit(args, rep.to_dict(), rep.to_text())
    return 0 if rep.ok else 1


def _retract_status(r) -> tuple[str, str]:
    for rep in (r.to_free.report, r.composite, r.base_closed):
        if not rep.valid:
            return FAIL, f"{rep.failure} (degree {rep.degree})"
    return PASS, ""


def cmd_decompose(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    doc = _algebra_doc(args.source)
    a = doc.value
    if args.kind == "weights":
        wd = weight_decompose(a, Bimodule.regular(a), D, budget=args.budget)
        rep = ScenarioReport("weight decomposition", {"B": doc.name or args.source, "M": "B", "max_degree": D})
        rep.add_report("pieces add up to HH(B ⋉ B)", wd.audit)
        for piece in wd.pieces:
            st, why = _retract_status(piece.retract)
            rep.add(f"H({piece.k}) -> j_*G({piece.k}) -> H({piece.k}) is {piece.retract.scalar}·id", st, why)
            rep.data[f"H({piece.k})"] = [piece.H.dim(q) for q in range(D + 1)]
    elif args.kind == "partitions":
        rep = ScenarioReport("partition decomposition", {"A0": doc.name or args.source, "slots": args.slots,
                                                         "max_degree": D})
        for k in range(1, args.k + 1):
            for P in partitions(k):
                _, pc = partition_decompose(a, [Bimodule.regular(a)] * args.slots, P, D, budget=args.budget)
                st, why = _retract_status(pc.retract)
                rep.add(f"H{P} -> j_*G{P} -> H{P} is {pc.retract.scalar}·id", st, why)
                rep.data[f"H{P}"] = [pc.H.dim(q) for q in range(D + 1)]
    else:
        i = _ideal(doc, args.ideal)
        filt = ideal_filtration(a, i, D, budget=args.budget)
        n = filt.nilpotency
        rep = ScenarioReport("ideal filtration", {"algebra": doc.name or args.source, "ideal": args.ideal,
                                                  "nilpotency": n, "max_degree": D})
        rep.add_report(f"F^k_q = 0 for k >= {n}(q+1)", filt.vanishing())
        rep.add_report("F^0/F^1 = HH(A/I)", filt.quotient_comparison())
        for q in range(D + 1):
            rep.data[f"q={q}"] = [filt.dim(k, q) for k in range(n * (q + 1) + 1)]
    rep.certified["structure maps"] = f"degrees 0..{D}"
    lines = [rep.to_text()] + [f"  {k}: {v}" for k, v in rep.data.items()]
    _emit(args, rep.to_dict(), "\n".join(lines))
    return 0 if rep.ok else 1


def cmd_gapset(args) -> int:
    raw = "".join(args.values).replace(",", "")
    if not raw or any(c not in "012" for c in raw):
        raise UsageError("values must be digits 0, 1 or 2")
    f = [int(c) for c in raw]
    g = gap_set(f)
    members = sorted(g.members)
    _emit(args, {"f": f, "A_f": members}, "A_f = {" + ", ".join(map(str, members)) + "}")
    return 0


def cmd_partitions(args) -> int:
    if args.k < 1:
        raise UsageError("k must be positive")
    ps = partitions(args.k)
    line = ">".join(str(p) for p in ps)
    norms = [p.norm for p in ps]
    _emit(args, {"k": args.k, "order": [str(p) for p in ps], "norms": norms},
          line + "\nnorms: " + ", ".join(map(str, norms)))
    return 0


def cmd_check(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    if args.scenario == "nilpotent":
        doc = _algebra_doc(args.source)
        rep = check_nilpotent_invariance(doc.value, _ideal(doc, args.ideal), D, args.window, args.hp_degree,
                                         args.max_weight, args.budget)
    elif args.scenario == "mv":
        doc = load(args.source)
        if not isinstance(doc.value, SplitSquare):
            raise UsageError(f"{args.source} is not a square document")
        rep = check_mayer_vietoris(doc.value, D, args.window, args.hp_degree, args.budget)
    else:
        if args.random:
            rep = random_free_suite(args.random, args.max_degree or 5, window=args.window, seed=args.seed)
        else:
            if not args.source:
                raise UsageError("give a simplicial document or --random COUNT")
            doc = load(args.source)
            if not isinstance(doc.value, SimplicialModule) or isinstance(doc.value, CyclicModule):
                raise UsageError(f"{args.source} is not a simplicial document")
            n = doc.value
            if args.max_degree is not None and args.max_degree < n.max_degree:
                deep = n
                n = n.restrict(args.max_degree)
                ext = deep.restrict if deep.max_degree >= tower_degree(args.window) else None
            else:
                ext = None
            rep = check_free_vanishing(n, args.window, ext, name=doc.name or args.source)
    return _emit_report(args, rep)


def cmd_suite(args) -> int:
    D = args.max_degree or CHAIN_DEFAULT
    total = ScenarioReport("suite", {"max_degree": D})
    for rep in (run_lemma_suite(D, args.budget), structural_suite(D)):
        total.merge(rep, rep.scenario)
        total.seconds += rep.seconds
    return _emit_report(args, total)


def cmd_corpus(args) -> int:
    names = corpus_names()
    _emit(args, {"corpus": names}, "\n".join(names))
    return 0


def cmd_schema(args) -> int:
    print(json.dumps(schema(), indent=2))
    return 0


COMMANDS = {
    "hh": cmd_hh, "hc": cmd_hc, "hp": cmd_hp, "sbi": cmd_sbi, "hcminus": cmd_hcminus,
    "decompose": cmd_decompose, "gapset": cmd_gapset, "partitions": cmd_partitions,
    "check": cmd_check, "suite": cmd_suite, "corpus": cmd_corpus, "schema": cmd_schema,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, UsageError, BudgetError, FileNotFoundError) as exc:
        print(f"qcyclic: error: {exc}", file=sys.stderr)
        return 2
    except LinAlgError as exc:
        print(f"qcyclic: computation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
