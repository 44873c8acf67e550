"""One test per acceptance criterion; each records a pass/fail line with its timing."""


from oracles import NormalizedBarOracle, truncated_table
from qcyclic.algcore import dual_numbers, truncated_polynomial
from qcyclic.cli import main
from qcyclic.cychom import CyclicHomology
from qcyclic.cyccat import constant_module
from qcyclic.hhdecomp import gap_set, hh, ideal_filtration, partitions
from qcyclic.verify import (
    DEFAULT_SEED,
    check_free_vanishing,
    check_mayer_vietoris,
    check_nilpotent_invariance,
    dual_numbers_square,
    random_free_suite,
    run_lemma_suite,
    structural_suite,
)


def _failures(rep):
    return [v.claim for v in rep.verdicts if v.status != "pass"]


def test_criterion_1_partition_order(record, capsys):
    with record(1, "partition order for k = 4", 1.0) as st:
        assert main(["partitions", "4"]) == 0
        lines = capsys.readouterr().out.splitlines()
        norms = [p.norm for p in partitions(4)]
        st["detail"] = f"{lines[0]} norms {norms}"
        assert lines[0] == "(4)>(3+1)>(2+2)>(2+1+1)>(1+1+1+1)"
        assert norms == [256, 208, 160, 148, 85]
        assert lines[1] == "norms: 256, 208, 160, 148, 85"


def test_criterion_2_gap_sets(record):
    with record(2, "gap sets on Z/11", 1.0) as st:
        a_f = sorted(gap_set([2, 2, 0, 1, 2, 1, 1, 0, 2, 0, 1]).members)
        a_g = sorted(gap_set([2, 2, 0, 1, 2, 1, 1, 0, 2, 0, 2]).members)
        st["detail"] = f"A_f = {a_f}, A_g = {a_g}"
        assert a_f == [0, 4, 8]
        assert a_g == [4, 8]


def test_criterion_3_retractions(record):
    with record(3, "retract composites are scalar identities, D = 6", 30.0) as st:
        rep = run_lemma_suite(6)
        retracts = [v for v in rep.verdicts if "j_*G" in v.claim]
        st["detail"] = f"{sum(v.status == 'pass' for v in retracts)}/{len(retracts)} composites exact"
        # 4 weight pieces, 6 partitions of k <= 3, 3 split-square pieces
        assert len(retracts) == 13
        assert rep.ok, _failures(rep)


def test_criterion_4_free_cyclic_vanishing(record):
    with record(4, "HH -> HC onto, S = 0, HP = 0 for j_*N", 120.0) as st:
        const = check_free_vanishing(constant_module(5), extension=constant_module, name="constant Q")
        rand = random_free_suite(20, max_degree=5, dim_cap=2, seed=DEFAULT_SEED)
        total = const.counts()["pass"] + rand.counts()["pass"]
        st["detail"] = f"constant Q and 20 random N (seed {DEFAULT_SEED}): {total} checks pass"
        assert const.ok, _failures(const)
        assert rand.ok, _failures(rand)
        assert len(rand.verdicts) == 80


def test_criterion_5_nilpotent_invariance(record):
    with record(5, "HP(Q[x]/x^n) -> HP(Q) iso, n = 2, 3", 120.0) as st:
        dims = {}
        for n in (2, 3):
            a, i = truncated_polynomial(n)
            rep = check_nilpotent_invariance(a, i)
            assert rep.ok, _failures(rep)
            for side in ("hp_source", "hp_target"):
                for p in (0, 1):
                    assert rep.data[side][p]["status"] == "stabilized"
            dims[n] = (rep.data["hp_dims"][0], rep.data["hp_dims"][1])
            assert dims[n] == (1, 0)
        st["detail"] = "even/odd dims " + ", ".join(f"n={n}: {d}" for n, d in dims.items())


def test_criterion_6_mayer_vietoris(record):
    with record(6, "HP Mayer-Vietoris on the dim-3 split square", 180.0) as st:
        rep = check_mayer_vietoris(dual_numbers_square())
        nodes = [v for v in rep.verdicts if v.claim.startswith("exact at HP")]
        st["detail"] = f"{len(nodes)} nodes rank-exact, HP(ifib) dims {rep.data['hp_dims']['K']}"
        assert len(nodes) == 6
        assert rep.data["hp_dims"]["K"] == {0: 0, 1: 0}
        assert rep.ok, _failures(rep)


def test_criterion_7_bar_complex_oracle(record):
    with record(7, "HH(Q[e]) via column 0 equals bar-complex oracle", 30.0) as st:
        e = CyclicHomology(hh(dual_numbers(), 6))
        ours = [e.hh(n).dim for n in range(6)]
        oracle = NormalizedBarOracle(truncated_table(2), 2, 0).hh_dims(5)
        st["detail"] = f"column 0 {ours}, oracle {oracle}"
        assert ours == oracle == [2, 1, 1, 1, 1, 1]


def test_criterion_8_structural_suite(record):
    with record(8, "D∘D = 0, cyclic identities, audits, SBI exactness", 180.0) as st:
        rep = structural_suite(6)
        c = rep.counts()
        st["detail"] = f"{c['pass']} pass, {c['fail']} fail, {c['undetermined']} undetermined"
        assert rep.ok, _failures(rep)


def test_criterion_9_filtration_bound(record):
    with record(9, "F^k_q = 0 for k >= 3(q+1), q <= 6", 10.0) as st:
        a, i = truncated_polynomial(3)
        filt = ideal_filtration(a, i, 6)
        assert filt.vanishing()
        nonzero = [(k, q) for q in range(7) for k in range(3 * (q + 1), 3 * (q + 1) + 4) if filt.dim(k, q)]
        # the bound is sharp: x^2 ⊗ .. ⊗ x^2 sits in F^{2(q+1)}
        sharp = all(filt.dim(2 * (q + 1), q) == 1 for q in range(7))
        st["detail"] = f"no nonzero F^k_q beyond the bound; F^(2(q+1))_q = 1 for all q: {sharp}"
        assert not nonzero and sharp
        assert filt.nilpotency == 3
