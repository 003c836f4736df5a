import pytest
from hypothesis import HealthCheck, settings

from qaffine.dynkin import cartan

settings.register_profile("qaffine", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qaffine")

# criterion -> list of (label, ok, literal)
ACCEPTANCE: dict[int, list[tuple[str, bool, bool]]] = {}
TITLES = {
    1: "PQ-oracle suite, A1-A3, c in {1,2,3}, 0 <= m,n <= 8",
    2: "Fock ground truth, reduced and vertex families on A1",
    3: "weight-one Heisenberg commutator straightened from E/F",
    4: "divided-power identities in Fock plus induction replay",
    5: "propagation identities as Leibniz consequences",
    6: "renormalization transport, both orientations",
    7: "psi symmetry of bracket modes, n <= 8",
    8: "calibration on minimal families, vertex families in Fock",
    9: "mutation sanity, nonzero residuals",
}


@pytest.fixture
def record():
    def _record(criterion: int, label: str, ok: bool, literal: bool = True):
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), literal))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(TITLES):
        rows = ACCEPTANCE.get(k)
        if not rows:
            tr.write_line(f"[SKIP] {k}. {TITLES[k]}: not run")
            continue
        literal = [r for r in rows if r[2]]
        corrected = [r for r in rows if not r[2]]
        ok = all(r[1] for r in literal)
        line = f"[{'PASS' if ok else 'FAIL'}] {k}. {TITLES[k]}"
        bad = [r[0] for r in literal if not r[1]]
        if bad:
            line += "; failing as printed: " + ", ".join(bad)
        if corrected:
            cok = all(r[1] for r in corrected)
            line += f"; corrected readings {'pass' if cok else 'FAIL'}"
        tr.write_line(line)


@pytest.fixture(scope="session")
def a1():
    return cartan("A1")


@pytest.fixture(scope="session")
def a2():
    return cartan("A2")
