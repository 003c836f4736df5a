import pytest
from hypothesis import given, strategies as st

from qaffine.dynkin import cartan
from qaffine.heisenberg import (HeisAlgebra, bracket_mode, check_bracket_series, check_inverse_series,
                                check_pq_relation, is_normal, kappa, mode, normal_order,
                                pq_oracle_suite, predicted_coefficient, psi_pair, series_oracle)
from qaffine.laurent import ONE, ZERO, qint, qpow

A1, A2 = cartan("A1"), cartan("A2")


def vev(x):
    """Vacuum expectation: the coefficient of the empty word after normal ordering."""
    return normal_order(x).terms.get((), ZERO)


def test_kappa_values():
    assert kappa(2, 1, 1) == qint(2)
    assert kappa(2, 2, 1) == qint(4) * qint(2) / 2
    assert kappa(-1, 1, 1) == -ONE
    assert kappa(-1, 1, 1, renormalized=True) == ONE
    assert kappa(-1, 2, 1, renormalized=True) == kappa(-1, 2, 1)
    assert kappa(0, 3, 2) == ZERO
    with pytest.raises(ValueError):
        kappa(2, 0, 1)


def test_rescaled_bracket_antisymmetric():
    h = HeisAlgebra(A2, 1)
    assert h.bracket((1, 2), (2, -2)) == -h.bracket((2, -2), (1, 2))
    assert h.bracket((1, 1), (1, 1)) == ZERO


# vacuum expectations of Q^{(n)} P^{(n)}, computed by Wick reordering
@pytest.mark.parametrize("datum,i,j,n,c,expected", [
    (A1, 1, 1, 1, 1, qint(2)),
    (A1, 1, 1, 2, 1, qpow(2) + ONE + qpow(-2)),
    (A1, 1, 1, 1, 2, qint(2) * qint(2)),
    (A2, 1, 2, 1, 2, -(qpow(1) + qpow(-1))),
    (A2, 1, 2, 2, 1, ZERO),
    (A2, 1, 2, 2, 2, ONE),
])
def test_reordering_scalar_frozen(datum, i, j, n, c, expected):
    h = HeisAlgebra(datum, c)
    got = vev(mode(h, "Q", "(n)", j, n) * mode(h, "P", "(n)", i, n))
    assert got == expected
    assert predicted_coefficient(datum.C(i, j), n, c, "(n)", "(n)") == expected


@given(st.integers(0, 4), st.integers(0, 4), st.integers(1, 3),
       st.sampled_from([(1, 1), (1, 2), (2, 1)]),
       st.sampled_from(["(n)", "(1^n)"]), st.sampled_from(["(n)", "(1^n)"]))
def test_pq_relation_property(m, n, c, ij, vq, vp):
    h = HeisAlgebra(A2, c)
    ok, res = check_pq_relation(h, ij[0], ij[1], m, n, vq, vp)
    assert ok, res


@pytest.mark.parametrize("renorm", [False, True])
@pytest.mark.parametrize("pairing", [2, -1, 0])
def test_series_oracle(pairing, renorm):
    for c in (1, 2, 3):
        for vq in ("(n)", "(1^n)"):
            for vp in ("(n)", "(1^n)"):
                assert series_oracle(pairing, c, 8, renorm, vq, vp)


def test_series_oracle_is_sensitive_to_the_sign():
    # the plain kappa series does not reproduce the renormalized coefficients
    from qaffine.heisenberg import _scaled_kappa, exp_series
    plain = exp_series([ZERO] + [_scaled_kappa(-1, n, 1, False) for n in range(1, 5)])
    assert plain[1] != predicted_coefficient(-1, 1, 1, "(n)", "(n)", renormalized=True)
    assert plain[1] == predicted_coefficient(-1, 1, 1, "(n)", "(n)")


def test_renormalized_adjacent_coefficients_are_positive():
    assert predicted_coefficient(-1, 1, 2, "(n)", "(n)", renormalized=True) == qint(2)
    assert predicted_coefficient(-1, 1, 2, "(n)", "(n)") == -qint(2)


def test_renormalized_relation_at_mode_level():
    h = HeisAlgebra(A2, 2, renormalized=True)
    for m in range(4):
        for n in range(4):
            assert check_pq_relation(h, 1, 2, m, n)[0]


@pytest.mark.parametrize("kind", ["P", "Q"])
@pytest.mark.parametrize("c", [1, 2])
def test_inverse_and_bracket_series(kind, c):
    h = HeisAlgebra(A1, c)
    assert check_inverse_series(h, kind, 1, 6)[0]
    assert check_bracket_series(h, kind, 1, 6)[0]


def test_psi_pair():
    assert psi_pair(HeisAlgebra(A2, 1), 1, 6)


def test_bracket_mode_one():
    # Q^{[1]} = -q [1] Q^{(1^0)} Q^{(1)} = -q H_{i,1}
    h = HeisAlgebra(A1, 1)
    assert bracket_mode(h, "Q", "[1^n]", 1, 1) == h.letter(1, 1).scale(-qpow(1))


words = st.lists(st.tuples(st.integers(1, 2), st.sampled_from([-2, -1, 1, 2])), max_size=4)


@given(words, words, words)
def test_product_associative_and_normal(u, v, w):
    h = HeisAlgebra(A2, 1)
    x, y, z = (h.element({tuple(t): ONE}) for t in (u, v, w))
    assert (x * y) * z == x * (y * z)
    assert all(is_normal(k) for k in (x * y).terms)
    assert normal_order(normal_order(x)).terms == normal_order(x).terms


def test_pq_suite_records():
    recs = pq_oracle_suite(A2, 1, 3)
    assert len(recs) == 4 * 4
    assert all(r["ok"] for r in recs)
