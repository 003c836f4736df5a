"""Quantum Heisenberg algebra at a fixed level and its half vertex operators.

Elements are written in the rescaled generators ``H(i, m) = h_{i,m} / [|m|]``.
In that basis every coefficient of the exponential series defining the
P/Q modes lies in Q[q, q^-1] (only factorials appear in denominators),
and the commutator ``[H(i, m), H(j, -m)] = kappa_{i,j,m} / [m]^2`` is again
a Laurent polynomial.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable

from .dynkin import CartanDatum
from .laurent import ONE, ZERO, LaurentPoly, ext_power, qint, qpow, render, sign, sym_power

Letter = tuple[int, int]  # (vertex, mode), mode != 0
Word = tuple[Letter, ...]


# commutators -----------------------------------------------------------

@lru_cache(maxsize=None)
def kappa(pairing: int, n: int, c: int, renormalized: bool = False) -> LaurentPoly:
    """[h_{i,n}, h_{j,-n}] for n > 0, given <i, j> = pairing."""
    if n <= 0:
        raise ValueError("kappa needs n > 0")
    if pairing == 0:
        return ZERO
    val = (qint(n * pairing) * qint(n * c)) / n
    if renormalized and (n * pairing) % 2:
        val = -val
    return val


def h_commutator(datum: CartanDatum, i: int, m: int, j: int, n: int, c: int,
                 renormalized: bool = False) -> LaurentPoly:
    """[h_{i,m}, h_{j,n}]; central, nonzero only for m = -n."""
    if m == 0 or n == 0:
        raise ValueError("Heisenberg modes must be nonzero")
    if m != -n:
        return ZERO
    k = kappa(datum.C(i, j), abs(m), c, renormalized)
    return k if m > 0 else -k


@lru_cache(maxsize=None)
def _scaled_kappa(pairing: int, n: int, c: int, renormalized: bool) -> LaurentPoly:
    # kappa / [n]^2 computed without leaving the Laurent ring
    if pairing == 0:
        return ZERO
    val = (qint(n * pairing) / qint(n)) * (qint(n * c) / qint(n)) * Fraction(1, n)
    if renormalized and (n * pairing) % 2:
        val = -val
    return val


class HeisAlgebra:
    """The Heisenberg algebra attached to a Cartan datum at level ``c``."""

    def __init__(self, datum: CartanDatum, c: int, renormalized: bool = False):
        self.datum, self.c, self.renormalized = datum, c, renormalized
        self._pass = lru_cache(maxsize=None)(self._pass_uncached)

    def bracket(self, a: Letter, b: Letter) -> LaurentPoly:
        """[H(a), H(b)] in the rescaled basis."""
        (i, m), (j, n) = a, b
        if m != -n:
            return ZERO
        k = _scaled_kappa(self.datum.C(i, j), abs(m), self.c, self.renormalized)
        return k if m > 0 else -k

    def element(self, terms=None) -> "HeisElement":
        return HeisElement(self, terms)

    def one(self) -> "HeisElement":
        return HeisElement(self, {(): ONE})

    def letter(self, i: int, m: int) -> "HeisElement":
        if m == 0:
            raise ValueError("Heisenberg modes must be nonzero")
        return HeisElement(self, {((i, m),): ONE})

    # Wick reordering of a block of annihilators past a block of creators.
    def _pass_uncached(self, ann: Word, cre: Word) -> tuple:
        if not ann or not cre:
            return (((cre, ann), ONE),)
        a, rest = ann[0], ann[1:]
        out: dict = {}
        for (c2, a2), coef in self._pass(rest, cre):
            key = (c2, _sorted((a,) + a2))
            out[key] = out.get(key, ZERO) + coef
            for k, x in enumerate(c2):
                s = self.bracket(a, x)
                if s:
                    key = (c2[:k] + c2[k + 1:], a2)
                    out[key] = out.get(key, ZERO) + coef * s
        return tuple((k, v) for k, v in out.items() if v)

    def mul_words(self, u: Word, v: Word) -> dict:
        """Product of two normal-ordered words, normal-ordered."""
        cu, au = _split(u)
        cv, av = _split(v)
        out: dict = {}
        for (c2, a2), coef in self._pass(au, cv):
            w = _sorted(cu + c2) + _sorted(a2 + av)
            out[w] = out.get(w, ZERO) + coef
        return out


def _sorted(w: Iterable[Letter]) -> Word:
    return tuple(sorted(w))


def _split(w: Word) -> tuple[Word, Word]:
    return tuple(x for x in w if x[1] < 0), tuple(x for x in w if x[1] > 0)


def is_normal(w: Word) -> bool:
    cre, ann = _split(w)
    return w == _sorted(cre) + _sorted(ann)


class HeisElement:
    """Finite Q[q, q^-1]-combination of words in the rescaled generators."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: HeisAlgebra, terms=None):
        self.alg = alg
        self.terms: dict[Word, LaurentPoly] = {}
        for w, c in (terms or {}).items():
            c = LaurentPoly.coerce(c)
            if c:
                w = tuple(w)
                self.terms[w] = self.terms.get(w, ZERO) + c
                if not self.terms[w]:
                    del self.terms[w]

    def __add__(self, other: "HeisElement") -> "HeisElement":
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, ZERO) + c
            if s:
                t[w] = s
            else:
                t.pop(w, None)
        return HeisElement(self.alg, t)

    def __neg__(self):
        return HeisElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HeisElement":
        c = LaurentPoly.coerce(c)
        return HeisElement(self.alg, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, HeisElement):
            return self.scale(other)
        a, b = normal_order(self), normal_order(other)
        out: dict = {}
        for u, cu in a.terms.items():
            for v, cv in b.terms.items():
                cuv = cu * cv
                for w, cw in self.alg.mul_words(u, v).items():
                    out[w] = out.get(w, ZERO) + cuv * cw
        return HeisElement(self.alg, out)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HeisElement):
            return NotImplemented
        return normal_order(self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(normal_order(self).terms.items()))

    def __repr__(self):
        return f"HeisElement({render_heis(self)})"

    def __str__(self):
        return render_heis(self)


def normal_order(x: HeisElement) -> HeisElement:
    """Move creators (negative modes) left of annihilators, sorting each block."""
    alg = x.alg
    out: dict = {}
    for w, coef in x.terms.items():
        if is_normal(w):
            out[w] = out.get(w, ZERO) + coef
            continue
        acc = {(): ONE}
        for letter in w:
            nxt: dict = {}
            for u, cu in acc.items():
                for v, cv in alg.mul_words(u, (letter,)).items():
                    nxt[v] = nxt.get(v, ZERO) + cu * cv
            acc = {k: v for k, v in nxt.items() if v}
        for v, cv in acc.items():
            out[v] = out.get(v, ZERO) + coef * cv
    return HeisElement(alg, out)


def render_heis(x: HeisElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for w in sorted(x.terms, key=lambda w: (len(w), w)):
        word = " ".join(f"H({i},{m})" for i, m in w) or "1"
        parts.append(f"({render(x.terms[w])}) {word}")
    return " + ".join(parts)


# half vertex operators -------------------------------------------------

def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _exp_coefficient(alg: HeisAlgebra, i: int, n: int, sign_mode: int, sign_exp: int) -> HeisElement:
    """Coefficient of z^n in exp(sign_exp * sum_k H(i, sign_mode * k) z^k)."""
    terms = {}
    for mu in _partitions(n):
        mult: dict[int, int] = {}
        for p in mu:
            mult[p] = mult.get(p, 0) + 1
        denom = 1
        for m in mult.values():
            denom *= factorial(m)
        word = _sorted((i, sign_mode * p) for p in mu)
        terms[word] = LaurentPoly.const(Fraction(sign_exp ** len(mu), denom))
    return HeisElement(alg, terms)


def half_vertex_modes(alg: HeisAlgebra, kind: str, variant: str, i: int, N: int) -> list[HeisElement]:
    """Modes 0..N of one of the four exponential generating series.

    kind 'Q' uses h_{i,n}, kind 'P' uses h_{i,-n}; variant '(n)' is the
    plain exponential, '(1^n)' the inverse series with its (-1)^n sign.
    """
    if kind not in ("P", "Q") or variant not in ("(n)", "(1^n)"):
        raise ValueError(f"unknown half vertex series {kind}{variant}")
    sign_mode = 1 if kind == "Q" else -1
    out = []
    for n in range(N + 1):
        if variant == "(n)":
            out.append(_exp_coefficient(alg, i, n, sign_mode, 1))
        else:
            e = _exp_coefficient(alg, i, n, sign_mode, -1)
            out.append(e if n % 2 == 0 else -e)
    return out


@lru_cache(maxsize=None)
def mode(alg: HeisAlgebra, kind: str, variant: str, i: int, n: int) -> HeisElement:
    if n < 0:
        return alg.element()
    return half_vertex_modes(alg, kind, variant, i, n)[n]


def bracket_mode(alg: HeisAlgebra, kind: str, shape: str, i: int, n: int) -> HeisElement:
    """The bracketed combinations P^{[1^n]}, P^{[n]}, Q^{[1^n]}, Q^{[n]}.

    Each is sum_{m} s^m [m] X^{(1^{n-m})} X^{(m)} (or with the variants
    exchanged for shape '[n]') where s = -q for Q and -q^-1 for P.
    """
    s = -1
    out = alg.element()
    for m in range(0, n + 1):
        coef = qint(m) * qpow(m if kind == "Q" else -m, s ** m)
        if not coef:
            continue
        if shape == "[1^n]":
            t = mode(alg, kind, "(1^n)", i, n - m) * mode(alg, kind, "(n)", i, m)
        elif shape == "[n]":
            t = mode(alg, kind, "(n)", i, n - m) * mode(alg, kind, "(1^n)", i, m)
        else:
            raise ValueError(shape)
        out = out + t.scale(coef)
    return out


# relation checks ---------------------------------------------------------

def predicted_coefficient(pairing: int, k: int, c: int, variant_q: str, variant_p: str,
                          renormalized: bool = False) -> LaurentPoly:
    """Scalar multiplying P^{(m-k)} Q^{(n-k)} in the reordering of Q^{(n)} P^{(m)}."""
    if pairing == 0:
        return ONE if k == 0 else ZERO
    same = variant_q == variant_p
    if pairing == 2:
        f = qint(2) * qint(c)
        return sym_power(f, k) if same else ext_power(f, k)
    if pairing == -1:
        f = qint(c)
        base = ext_power(f, k) if same else sym_power(f, k)
        return base if renormalized or k % 2 == 0 else -base
    raise ValueError(f"unsupported pairing {pairing}")


def check_pq_relation(alg: HeisAlgebra, i: int, j: int, m: int, n: int,
                      variant_q: str = "(n)", variant_p: str = "(n)") -> tuple[bool, HeisElement]:
    """Reorder Q_j^{(n)} P_i^{(m)} and compare with the closed form.

    The closed form keeps the variants of each side, so the residual is
    zero exactly when the commutation rule holds at (m, n).
    """
    pairing = alg.datum.C(i, j)
    lhs = mode(alg, "Q", variant_q, j, n) * mode(alg, "P", variant_p, i, m)
    rhs = alg.element()
    for k in range(0, min(m, n) + 1):
        coef = predicted_coefficient(pairing, k, alg.c, variant_q, variant_p, alg.renormalized)
        if coef:
            rhs = rhs + (mode(alg, "P", variant_p, i, m - k) * mode(alg, "Q", variant_q, j, n - k)).scale(coef)
    residual = normal_order(lhs - rhs)
    return residual.is_zero(), residual


def check_inverse_series(alg: HeisAlgebra, kind: str, i: int, N: int) -> tuple[bool, list[HeisElement]]:
    """sum_{a+b=n} (-1)^b X^{(a)} X^{(1^b)} = 0 for 1 <= n <= N."""
    plain = half_vertex_modes(alg, kind, "(n)", i, N)
    inv = half_vertex_modes(alg, kind, "(1^n)", i, N)
    residuals = []
    for n in range(1, N + 1):
        r = alg.element()
        for a in range(n + 1):
            t = plain[a] * inv[n - a]
            r = r + (t if (n - a) % 2 == 0 else -t)
        residuals.append(r)
    return all(r.is_zero() for r in residuals), residuals


def check_bracket_series(alg: HeisAlgebra, kind: str, i: int, N: int) -> tuple[bool, list[HeisElement]]:
    """Bracket generating functions against their exponential closed forms.

    (q - q^-1) sum_{n>=1} (-q)^{-n} Q^{[1^n]} u^n = exp((q - q^-1) sum h_{i,n} u^n) - 1
    (q - q^-1) sum_{n>=1} (-q)^{n} P^{[1^n]} z^n = 1 - exp(-(q - q^-1) sum h_{i,-n} z^n)
    """
    t = qpow(1) - qpow(-1)
    sgn = 1 if kind == "Q" else -1
    # series S = sum_n s_n u^n with s_n = sgn * t * h_{i, sgn n} = sgn * t * [n] H(i, sgn n)
    s = [alg.element()] + [alg.letter(i, sgn * n).scale(qint(n) * t * sgn) for n in range(1, N + 1)]
    e = [alg.one()] + [alg.element() for _ in range(N)]
    for n in range(1, N + 1):
        acc = alg.element()
        for k in range(1, n + 1):
            acc = acc + (s[k] * e[n - k]).scale(k)
        e[n] = acc.scale(Fraction(1, n))
    residuals = []
    for n in range(1, N + 1):
        lhs = bracket_mode(alg, kind, "[1^n]", i, n).scale(t * qpow(-n if kind == "Q" else n, sign(n)))
        rhs = e[n] if kind == "Q" else -e[n]
        residuals.append(normal_order(lhs - rhs))
    return all(r.is_zero() for r in residuals), residuals


def psi_pair(alg: HeisAlgebra, i: int, N: int) -> bool:
    """ψ exchange: X^{(n)} <-> (-1)^n X^{(1^n)} is the antipode-like flip H -> -H."""
    for kind in ("P", "Q"):
        plain = half_vertex_modes(alg, kind, "(n)", i, N)
        inv = half_vertex_modes(alg, kind, "(1^n)", i, N)
        for n in range(N + 1):
            flipped = HeisElement(alg, {w: c * sign(len(w)) for w, c in plain[n].terms.items()})
            if not (flipped - inv[n].scale(sign(n))).is_zero():
                return False
    return True


# series oracle -----------------------------------------------------------

def exp_series(s: list[LaurentPoly]) -> list[LaurentPoly]:
    """exp of a power series with zero constant term, truncated to len(s)."""
    N = len(s) - 1
    e = [ONE] + [ZERO] * N
    for n in range(1, N + 1):
        acc = ZERO
        for k in range(1, n + 1):
            acc = acc + s[k] * e[n - k] * k
        e[n] = acc * Fraction(1, n)
    return e


def series_oracle(pairing: int, c: int, N: int, renormalized: bool = False,
                  variant_q: str = "(n)", variant_p: str = "(n)") -> bool:
    """Compare exp(sum kappa_n t^n / [n]^2) with the predicted reordering coefficients.

    Conjugating Q^{(n)} past the P-series multiplies by exactly this
    exponential, so agreement for every k <= N is equivalent to the
    commutation rule at all m, n.  The variants invert the exponential.
    """
    s = [ZERO] + [_scaled_kappa(pairing, n, c, renormalized) for n in range(1, N + 1)]
    if (variant_q == "(1^n)") != (variant_p == "(1^n)"):
        s = [x if n % 2 else -x for n, x in enumerate(s)]
    got = exp_series(s)
    return all(got[k] == predicted_coefficient(pairing, k, c, variant_q, variant_p, renormalized)
               for k in range(N + 1))


VARIANTS = ("(n)", "(1^n)")


def pq_oracle_suite(datum: CartanDatum, c: int, N: int, renormalized: bool = False) -> list[dict]:
    """Series oracle and mode-level reordering for every vertex pair and variant pair."""
    alg = HeisAlgebra(datum, c, renormalized)
    out = []
    for i in range(1, datum.rank + 1):
        for j in range(1, datum.rank + 1):
            for vq in VARIANTS:
                for vp in VARIANTS:
                    series = series_oracle(datum.C(i, j), c, N, renormalized, vq, vp)
                    bad = [(m, n) for m in range(N + 1) for n in range(N + 1)
                           if not check_pq_relation(alg, i, j, m, n, vq, vp)[0]]
                    out.append({"i": i, "j": j, "variant_q": vq, "variant_p": vp,
                                "series": series, "failures": bad, "ok": series and not bad})
    return out
