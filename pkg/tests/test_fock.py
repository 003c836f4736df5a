import pytest
from hypothesis import given, strategies as st

from qaffine.algebra import Algebra, E, F, Gen
from qaffine.dynkin import Weight, cartan
from qaffine.fock import (MUTATIONS, Calibration, FockRep, RepConfig, apply_word, calibrate,
                          check_grading, default_weights, evaluate_on, run_mutation, verify_body,
                          verify_instance, verify_renormalized, verify_routing)
from qaffine.heisenberg import HeisAlgebra
from qaffine.laurent import ONE, qint
from qaffine.presentations import Window, enumerate_instances, resolve

A1, A2 = cartan("A1"), cartan("A2")
SMALL = Window(lo=-2, hi=2, max_mode=2, max_bracket=2, max_power=2, divpow_b=1)


@pytest.fixture(scope="module")
def rep1():
    return FockRep(RepConfig())


@pytest.fixture(scope="module")
def rep2():
    return FockRep(RepConfig(datum=A2))


def test_config_validation():
    with pytest.raises(ValueError):
        RepConfig(truncation=0)


def test_vacuum_and_weights(rep1):
    vac = rep1.vacuum()
    assert rep1.states_of_weight(rep1.weight(vac), 0) == [vac]
    assert len(default_weights(rep1)) == 5


def test_scalar_crossing_on_vacuum(rep1):
    # [E_0, F_0] acts on the vacuum of weight lam by [<lam, i>]
    alg = Algebra(A1, 1)
    vac = rep1.vacuum()
    lam = rep1.weight(vac)
    got = evaluate_on(rep1, alg.comm([E(1, 0)], [F(1, 0)], lam), vac)
    assert got == {vac: qint(alg.ell(lam, 1))}


heis_words = st.lists(st.tuples(st.integers(1, 2), st.sampled_from([-2, -1, 1, 2])), max_size=3)


@given(heis_words, heis_words)
def test_heisenberg_action_is_multiplicative(u, v):
    rep = FockRep(RepConfig(datum=A2))
    h = HeisAlgebra(A2, 1)
    x, y = h.element({tuple(u): ONE}), h.element({tuple(v): ONE})
    st0 = ((0, 0), ((1, 1), (2, 1), (2, 2)))
    vec = {st0: ONE}
    assert rep.apply_heis(vec, x * y) == rep.apply_heis(rep.apply_heis(vec, y), x)


letters = st.builds(lambda k, i, n: Gen(k, i, n if k in "EF" else abs(n) + 1),
                    st.sampled_from(["E", "F", "QB1", "PB1", "Q", "P"]), st.integers(1, 2), st.integers(-2, 2))


@given(st.lists(letters, max_size=3), st.sampled_from(range(5)))
def test_operators_respect_the_grading(word, k):
    rep = FockRep(RepConfig(datum=A2))
    lam = default_weights(rep)[k]
    state = rep.states_of_weight(lam, 2)[0]
    assert check_grading(rep, word, state)


def test_routing_verdicts(rep1):
    alg = Algebra(A1, 1)
    g = E(1, -1)
    lam = next(w for w in default_weights(rep1)
               if any(apply_word(rep1, {s: ONE}, [g]) for s in rep1.states_of_weight(w, 4)))
    right = alg.target(next(iter(alg.word([g], lam).terms)))
    assert verify_routing(rep1, g, lam, right).ok
    v = verify_routing(rep1, g, lam, right.add_delta(2))
    assert not v.ok and v.active


def test_calibration_search():
    found = calibrate(A1)
    assert Calibration(0, 0, 1) in found and Calibration(0, 0, -1) in found
    assert all((c.v_e, c.v_f) == (0, 0) for c in found)


def test_diagonal_sign_is_invisible():
    alg = Algebra(A2, 1)
    reps = [FockRep(RepConfig(datum=A2, calibration=Calibration(0, 0, s))) for s in (1, -1)]
    for inst in enumerate_instances("idem.10", alg, Window(lo=0, hi=1), default_weights(reps[0])):
        assert verify_instance(reps[0], inst) == verify_instance(reps[1], inst)


def test_truncation_does_not_change_verdicts():
    alg = Algebra(A1, 1)
    r8, r10 = (FockRep(RepConfig(truncation=n)) for n in (8, 10))
    for fid in ("reduced.3", "vertex.6", "vertex.8"):
        for inst in enumerate_instances(fid, alg, SMALL, default_weights(r8)):
            a, b = verify_instance(r8, inst), verify_instance(r10, inst)
            assert (a.ok, a.residual_entries, a.active) == (b.ok, b.residual_entries, b.active)


@pytest.mark.parametrize("fid", resolve("vertex:holding") + resolve("minimal") + resolve("divpow:holding")
                         + ["pqrec.adjacent", "pqrec.orthogonal", "wtone:commutator"])
def test_holding_families_on_a2(rep2, fid):
    alg = Algebra(A2, 1)
    window = Window(lo=-1, hi=1, max_mode=2, max_bracket=2, max_power=2, divpow_b=1)
    insts = enumerate_instances(fid, alg, window, default_weights(rep2))
    verdicts = [verify_instance(rep2, i) for i in insts]
    assert all(v.ok for v in verdicts), [i.describe() for i, v in zip(insts, verdicts) if not v.ok][:3]


@pytest.mark.parametrize("fid", resolve("renorm:holding"))
def test_renormalized_families_pull_back(rep2, fid):
    alg = Algebra(A2, 1)
    for inst in enumerate_instances(fid, alg, Window(lo=-1, hi=1, max_mode=2, max_bracket=2),
                                    default_weights(rep2)):
        assert verify_renormalized(rep2, inst).ok, inst.describe()


@pytest.mark.parametrize("fid", ["vertex.6", "vertex.9", "reduced.5", "pqrec.same", "divpow.8",
                                 "wtone", "renorm.6"])
def test_printed_readings_fail_on_a2(rep2, fid):
    alg = Algebra(A2, 1)
    check = verify_renormalized if fid.startswith("renorm") else verify_instance
    insts = enumerate_instances(fid, alg, Window(lo=-2, hi=2, max_mode=2, max_bracket=2, divpow_b=2),
                                default_weights(rep2))
    assert any(not check(rep2, i).ok for i in insts)


def test_active_counts_guard_vacuous_passes(rep1):
    alg = Algebra(A1, 1)
    insts = enumerate_instances("reduced.3", alg, SMALL, default_weights(rep1))
    assert sum(verify_instance(rep1, i).active > 0 for i in insts) > len(insts) // 2


def test_mutations_are_detected(rep1):
    assert len(MUTATIONS) >= 10
    for m in MUTATIONS:
        hit, where = run_mutation(rep1, m)
        assert hit, m.name
