"""Acceptance criteria 1-9.

Each criterion records one or more checks.  Checks of the relations as
printed are "literal"; a criterion line reads PASS only when every literal
check holds.  Where a printed relation is false its test is a strict xfail
and a separate passing test covers the corrected reading.

Run ``python3 -m pytest tests/test_acceptance.py`` for the summary lines.
"""

import time

import pytest

from qaffine.algebra import Algebra, Gen, expand_brackets, psi_involution, straighten
from qaffine.dynkin import Weight, cartan
from qaffine.fock import (CALIBRATION_FAMILIES, MUTATIONS, FockRep, RepConfig, calibrate,
                          default_weights, run_mutation, verify_instance)
from qaffine.heisenberg import pq_oracle_suite
from qaffine.presentations import (DEFAULT_WINDOW, TRANSPORT, Window, check_propagation,
                                   enumerate_instances, get_family, wtone_body, divpow_step,
                                   resolve, transport)

A1, A2 = cartan("A1"), cartan("A2")


def _xfail_if(cond, fid):
    if cond:
        return pytest.param(fid, marks=pytest.mark.xfail(strict=True, reason=get_family(fid).reason))
    return fid


def _fock_failures(datum, fid, window=DEFAULT_WINDOW, rep=None):
    rep = rep or FockRep(RepConfig(datum=datum))
    insts = enumerate_instances(fid, Algebra(datum, 1), window, default_weights(rep))
    return len(insts), [i.describe() for i in insts if not verify_instance(rep, i).ok]


@pytest.fixture(scope="module")
def rep_a1():
    return FockRep(RepConfig())


# 1 ---------------------------------------------------------------------------

def test_c1_pq_oracle(record):
    t0 = time.perf_counter()
    bad = []
    for name in ("A1", "A2", "A3"):
        for c in (1, 2, 3):
            bad += [(name, c, r["i"], r["j"], r["variant_q"], r["variant_p"])
                    for r in pq_oracle_suite(cartan(name), c, 8) if not r["ok"]]
    elapsed = time.perf_counter() - t0
    record(1, "series oracle and mode reordering", not bad)
    record(1, f"runtime {elapsed:.0f}s under 120s", elapsed < 120)
    assert not bad
    assert elapsed < 120


# 2 ---------------------------------------------------------------------------

C2_FAMILIES = [f"reduced.{k}" for k in range(1, 7)] + [f"vertex.{k}" for k in range(6, 11)]
C2_LITERAL_FAILS = {"reduced.2", "vertex.6"}  # the others marked failing have no A1 instances


@pytest.mark.parametrize("fid", [_xfail_if(f in C2_LITERAL_FAILS, f) for f in C2_FAMILIES])
def test_c2_printed(record, rep_a1, fid):
    n, bad = _fock_failures(A1, fid, rep=rep_a1)
    record(2, fid, not bad)
    assert not bad, bad[:3]


@pytest.mark.parametrize("fid", resolve("reduced:holding") + resolve("vertex:holding"))
def test_c2_corrected(record, rep_a1, fid):
    n, bad = _fock_failures(A1, fid, rep=rep_a1)
    record(2, fid, not bad, literal=False)
    assert not bad, bad[:3]


def test_c2_calibration_is_free_of_the_bracket_family(record):
    found = calibrate(A1, CALIBRATION_FAMILIES)
    ok = RepConfig().calibration in found and not any(f.startswith("vertex") for f in CALIBRATION_FAMILIES)
    record(2, "calibration uses the minimal families only", ok)
    assert ok


# 3 ---------------------------------------------------------------------------

def test_c3_wtone_symbolic(record):
    t0 = time.perf_counter()
    ok = True
    for c in (1, 2, 3):
        alg = Algebra(A1, c)
        for l in range(-3, 4):
            res = straighten(wtone_body(alg, 1, 1, Weight((l,), (0,), 0), "level"), "minimal")
            ok &= res.normalized and res.element.is_zero()
    fast = (time.perf_counter() - t0) / 21 < 1.0
    record(3, "straightens to zero, under a second each", ok and fast)
    assert ok and fast


# 4 ---------------------------------------------------------------------------

C4_WINDOW = Window(max_power=3, divpow_b=2)


@pytest.mark.parametrize("k", [_xfail_if(k == "8", f"divpow.{k}") for k in "12345678"])
def test_c4_divpow_printed(record, k):
    datum = A1 if k in ("divpow.1", "divpow.2", "divpow.3", "divpow.4") else A2
    n, bad = _fock_failures(datum, k, C4_WINDOW)
    record(4, k, n > 0 and not bad)
    assert n and not bad, bad[:3]


def test_c4_divpow_corrected(record):
    n, bad = _fock_failures(A2, "divpow.8:Pj", C4_WINDOW)
    record(4, "divpow.8:Pj", n > 0 and not bad, literal=False)
    assert n and not bad


def test_c4_induction_replay(record):
    ok = all(divpow_step(Algebra(A1, c), 1, r, b, Weight((l,), (0,), 0)).element.is_zero()
             for c in (1, 2) for r in (2, 3) for b in range(-2, 3) for l in (-1, 0, 1))
    record(4, "induction step replayed by straightening", ok)
    assert ok


# 5 ---------------------------------------------------------------------------

MN = [(m, n) for m in range(-3, 4) for n in range(-3, 4)]


def test_c5_spread_same(record):
    ok = all(check_propagation(Algebra(A1, 1), "spread_same", m, n, Weight.zero(1)).ok for m, n in MN)
    record(5, "same-vertex identity", ok)
    assert ok


@pytest.mark.parametrize("acting", [
    pytest.param(a, marks=pytest.mark.xfail(strict=True, reason=(
        "the Leibniz rule gives [P, E_i] and [P, E_j] from the basic commutator table as the "
        "coefficients; the displayed q^-1 factors cannot arise from any scalar table")))
    for a in ("i", "j")])
def test_c5_spread_adj_printed(record, acting):
    ok = all(check_propagation(Algebra(A2, 1), "spread_adj", m, n, Weight.zero(2), i=1, j=2, acting=acting).ok
             for m, n in MN)
    record(5, f"adjacent identity, mode at {acting}", ok)
    assert ok


@pytest.mark.parametrize("acting", ["i", "j"])
def test_c5_spread_adj_leibniz(record, acting):
    ok = all(check_propagation(Algebra(A2, 1), "spread_adj", m, n, Weight.zero(2), i=1, j=2, acting=acting,
                               reading="leibniz").ok for m, n in MN)
    record(5, f"adjacent identity by Leibniz, mode at {acting}", ok, literal=False)
    assert ok


# 6 ---------------------------------------------------------------------------

def _transport_failures(fid):
    out = {}
    for datum in (A1, A2):
        rep = FockRep(RepConfig(datum=datum))
        weights = default_weights(rep)
        for d in datum.all_orientations():
            alg = Algebra(d, 1)
            fam = get_family(fid)
            bad = []
            for p in fam.params(d, DEFAULT_WINDOW):
                for lam in weights:
                    r = transport(fid, alg, p, lam)
                    if not r.ok:
                        bad.append(r.source.describe())
            out[(datum.name, tuple(sorted(d.orientation)))] = bad
    return out


C6_PRINTED = [f"idem.{k}" for k in range(2, 11)]


@pytest.mark.parametrize("fid", [_xfail_if(f == "idem.9", f) for f in C6_PRINTED])
def test_c6_transport_printed(record, fid):
    res = _transport_failures(fid)
    ok = not any(res.values())
    record(6, fid, ok)
    assert ok, {k: v[:2] for k, v in res.items() if v}


@pytest.mark.parametrize("fid", ["idem.9:fsym", "idem.5:graded", "idem.6:signfix"])
def test_c6_transport_corrected(record, fid):
    res = _transport_failures(fid)
    ok = not any(res.values())
    record(6, fid, ok, literal=False)
    assert ok


def test_c6_orientation_independent(record):
    # per family, the set of failing instances is the same for both orientations of A2
    same = True
    for fid in TRANSPORT:
        res = _transport_failures(fid)
        a2 = [set(v) for k, v in res.items() if k[0] == "A2"]
        same &= all(x == a2[0] for x in a2)
    record(6, "orientation independence", same)
    assert same


def test_c6_worked_example(record):
    from qaffine.algebra import E
    from qaffine.laurent import qint
    alg = Algebra(A1, 1)
    ok = True
    for lam in default_weights(FockRep(RepConfig())):
        for b in range(-3, 3):
            p = {"h": "QB1", "x": "E", "i": 1, "j": 1, "a": 0, "b": b}
            r = transport("idem.6", alg, p, lam)
            q = Gen("QB1", 1, 1)
            want = alg.comm([q], [E(1, b)], lam) - alg.word([E(1, b + 1)], lam, qint(2))
            ok &= r.ok and r.target.body == want
    record(6, "worked example [Q, E_b] = [2] E_(b+1)", ok)
    assert ok


# 7 ---------------------------------------------------------------------------

def test_c7_psi(record):
    alg = Algebra(A2, 1)
    lam = Weight.zero(2)
    ok = True
    for kind in ("Q", "P"):
        for i in (1, 2):
            for n in range(1, 9):
                lhs = psi_involution(alg.word([Gen(f"{kind}B1", i, n)], lam))
                rhs = expand_brackets(alg.word([Gen(f"{kind}B", i, n)], lam)).scale((-1) ** n)
                ok &= lhs == rhs
    record(7, "psi(X^[1^n]) = (-1)^n X^[n]", ok)
    assert ok


# 8 ---------------------------------------------------------------------------

C8_PRINTED = ["vertex.3", "vertex.4", "vertex.6", "vertex.7", "vertex.8", "vertex.9", "vertex.10"]


@pytest.fixture(scope="module")
def calibrated_a1():
    found = calibrate(A1, CALIBRATION_FAMILIES)
    assert found
    return [FockRep(RepConfig(calibration=c)) for c in found]


@pytest.mark.parametrize("fid", [_xfail_if(f == "vertex.6", f) for f in C8_PRINTED])
def test_c8_printed(record, calibrated_a1, fid):
    bad = [b for rep in calibrated_a1 for b in _fock_failures(A1, fid, rep=rep)[1]]
    record(8, fid, not bad)
    assert not bad, bad[:3]


@pytest.mark.parametrize("fid", ["vertex.6:signfix", "vertex.9:fsym"])
def test_c8_corrected(record, calibrated_a1, fid):
    bad = [b for rep in calibrated_a1 for b in _fock_failures(A1, fid, rep=rep)[1]]
    record(8, fid, not bad, literal=False)
    assert not bad


# 9 ---------------------------------------------------------------------------

def test_c9_mutations(record, rep_a1):
    missed = [m.name for m in MUTATIONS if not run_mutation(rep_a1, m)[0]]
    ok = len(MUTATIONS) >= 10 and not missed
    record(9, f"{len(MUTATIONS)} mutations", ok)
    assert ok, missed


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
