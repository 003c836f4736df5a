"""Level-one vertex-operator representation on a bosonic Fock space.

A basis state is a lattice point ``beta`` of the root lattice together with
a multiset of bosonic creation modes ``(j, n)``; the creation variable
``x_{j,n}`` stands for ``h_{j,-n} / [n]``.  The weight of
``(beta, mu)`` is ``Lambda_{i0} + beta + d delta`` with
``d = -(beta|beta)/2 - beta_{i0} - |mu|``, so every weight space is finite.

Each generator maps a basis state to a *finite* exact vector, so no
truncation error ever enters a computation: the truncation degree only
bounds which source states are tested.

E_i(z) and F_i(w) are normal-ordered exponentials in the Heisenberg modes,
times a lattice translation with a sign cocycle, times a power of the
spectral variable:

    E_i(z) = exp(sum a_n H(i,-n) z^n) exp(sum b_n H(i,n) z^-n) e^{alpha_i} z^{l_i + 1 + vE}
    F_i(w) = exp(sum c_n H(i,-n) w^n) exp(sum d_n H(i,n) w^-n) e^{-alpha_i} w^{-l_i + 1 + vF}

with a_n = (-1)^n q^{-2n}, b_n = -(-1)^n q^n, c_n = -(-1)^n q^{-n},
d_n = (-1)^n q^{2n}, l_i the source value of <lambda, alpha_i>, and
E_{i,r} (resp. F_{i,r}) the coefficient of z^{-r} (resp. w^{-r}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .dynkin import CartanDatum, Weight, cartan
from .algebra import AlgElement
from .heisenberg import HeisAlgebra, _partitions, _scaled_kappa, bracket_mode, mode
from .laurent import ONE, ZERO, LaurentPoly, qfactorial, qpow, sign

State = tuple  # (beta: tuple[int, ...], mu: tuple[(j, n), ...] sorted)
Vector = dict  # State -> LaurentPoly


@dataclass(frozen=True)
class Calibration:
    """Discrete choices fixed by the calibration search."""

    v_e: int = 0
    v_f: int = 0
    diagonal_sign: int = 1

    def __str__(self):
        return f"vE={self.v_e} vF={self.v_f} eps(ii)={self.diagonal_sign:+d}"


@dataclass(frozen=True)
class RepConfig:
    datum: CartanDatum = field(default_factory=lambda: cartan("A1"))
    truncation: int = 8
    base_vertex: int = 1
    calibration: Calibration = field(default_factory=Calibration)
    lattice_radius: int = 3

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation degree must be >= 1")


def _add(vec: Vector, key, val):
    s = vec.get(key, ZERO) + val
    if s:
        vec[key] = s
    else:
        vec.pop(key, None)


def _creation_series(coef: tuple[LaurentPoly, ...], k: int) -> list[tuple[tuple[int, ...], LaurentPoly]]:
    """Coefficient of z^k in exp(sum_n coef[n] x_n z^n) as (partition, scalar) pairs."""
    out = []
    for mu in _partitions(k):
        mult: dict[int, int] = {}
        for p in mu:
            mult[p] = mult.get(p, 0) + 1
        s = ONE
        for p, m in mult.items():
            s = s * coef[p] ** m * Fraction(1, factorial(m))
        out.append((mu, s))
    return out


class FockRep:
    """Exact action of the generators on the level-one Fock space."""

    def __init__(self, cfg: RepConfig):
        self.cfg = cfg
        self.datum = cfg.datum
        self.rank = self.datum.rank
        self.i0 = cfg.base_vertex
        self.cal = cfg.calibration
        self.heis = HeisAlgebra(self.datum, 1)
        self._E = lru_cache(maxsize=None)(self._vertex)

    # lattice & weights ---------------------------------------------------
    def _cb(self, beta, i):
        C = self.datum.cartan
        return sum(C[i - 1][k] * beta[k] for k in range(self.rank))

    def ell(self, beta, i) -> int:
        return (1 if i == self.i0 else 0) + self._cb(beta, i)

    def top_degree(self, beta) -> int:
        C = self.datum.cartan
        norm = sum(beta[a] * C[a][b] * beta[b] for a in range(self.rank) for b in range(self.rank))
        return -norm // 2 - beta[self.i0 - 1]

    def weight(self, state: State) -> Weight:
        beta, mu = state
        lam = tuple(1 if k + 1 == self.i0 else 0 for k in range(self.rank))
        return Weight(lam, tuple(beta), self.top_degree(beta) - sum(n for _, n in mu))

    def vacuum(self, beta=None) -> State:
        return (tuple(beta) if beta is not None else (0,) * self.rank, ())

    def states_of_weight(self, lam: Weight, max_energy: int | None = None) -> list[State]:
        """All basis states of weight ``lam`` (empty if ``lam`` is not a weight)."""
        base = tuple(1 if k + 1 == self.i0 else 0 for k in range(self.rank))
        if lam.lam != base:
            return []
        beta = lam.alpha
        energy = self.top_degree(beta) - lam.delta
        if energy < 0 or (max_energy is not None and energy > max_energy):
            return []
        return [(beta, mu) for mu in _colored_partitions(energy, self.rank)]

    def weights(self, max_energy: int, radius: int = 1) -> list[Weight]:
        """Weights with lattice part in a box and energy <= max_energy."""
        out = []
        base = tuple(1 if k + 1 == self.i0 else 0 for k in range(self.rank))
        for beta in itertools.product(range(-radius, radius + 1), repeat=self.rank):
            top = self.top_degree(beta)
            for e in range(max_energy + 1):
                out.append(Weight(base, tuple(beta), top - e))
        return out

    # cocycle ---------------------------------------------------------------
    def eps(self, i: int, beta) -> int:
        """epsilon(alpha_i, beta), bimultiplicative in beta."""
        s = 1
        for k, b in enumerate(beta):
            j = k + 1
            if j == i:
                e = self.cal.diagonal_sign
            elif (i, j) in self.datum.orientation:
                e = -1
            else:
                e = 1
            if e == -1 and b % 2:
                s = -s
        return s

    # Heisenberg pieces -----------------------------------------------------
    def apply_creation(self, vec: Vector, i: int, n: int) -> Vector:
        out: Vector = {}
        for (beta, mu), c in vec.items():
            _add(out, (beta, tuple(sorted(mu + ((i, n),)))), c)
        return out

    def apply_annihilation(self, vec: Vector, i: int, n: int) -> Vector:
        out: Vector = {}
        for (beta, mu), c in vec.items():
            seen = set()
            for k, (j, m) in enumerate(mu):
                if m != n or (j, m) in seen:
                    continue
                seen.add((j, m))
                s = _scaled_kappa(self.datum.C(i, j), n, 1, False)
                if not s:
                    continue
                mult = mu.count((j, m))
                rest = mu[:k] + mu[k + 1:]
                _add(out, (beta, rest), c * s * mult)
        return out

    def apply_heis_word(self, vec: Vector, word) -> Vector:
        for i, m in reversed(word):
            vec = self.apply_creation(vec, i, -m) if m < 0 else self.apply_annihilation(vec, i, m)
            if not vec:
                break
        return vec

    def apply_heis(self, vec: Vector, element) -> Vector:
        out: Vector = {}
        for w, c in element.terms.items():
            for k, v in self.apply_heis_word(vec, w).items():
                _add(out, k, c * v)
        return out

    # vertex operators --------------------------------------------------------
    @staticmethod
    @lru_cache(maxsize=None)
    def _coeffs(kind: str, top: int):
        if kind == "E":
            cre = lambda n: qpow(-2 * n, sign(n))
            ann = lambda n: qpow(n, -sign(n))
        else:
            cre = lambda n: qpow(-n, -sign(n))
            ann = lambda n: qpow(2 * n, sign(n))
        return (ZERO,) + tuple(cre(n) for n in range(1, top + 1)), (ZERO,) + tuple(ann(n) for n in range(1, top + 1))

    def _annihilation_part(self, kind, i, mu, top):
        """exp(sum ann_n H(i,n) w^n) on a monomial: dict (w-degree, mu') -> coef.

        The exponential of a derivation is a translation of the creation
        variables, so each factor x_{j,n} becomes x_{j,n} + s_{j,n} w^n.
        """
        _, ann = self._coeffs(kind, max(top, 1))
        groups: dict = {}
        for x in mu:
            groups[x] = groups.get(x, 0) + 1
        choices = []
        for (j, n), k in groups.items():
            s = ann[n] * _scaled_kappa(self.datum.C(i, j), n, 1, False)
            opts = []
            for r in range(k + 1 if s else 1):
                opts.append((r * n, ((j, n),) * (k - r), s ** r * comb(k, r)))
            choices.append(opts)
        out: dict = {}
        for combo in itertools.product(*choices):
            deg = sum(o[0] for o in combo)
            rest = tuple(sorted(x for o in combo for x in o[1]))
            coef = ONE
            for o in combo:
                coef = coef * o[2]
            key = (deg, rest)
            out[key] = out.get(key, ZERO) + coef
        return out

    def _vertex(self, kind: str, i: int, r: int, state: State) -> tuple:
        beta, mu = state
        l = self.ell(beta, i)
        if kind == "E":
            z0 = l + 1 + self.cal.v_e
            nb = tuple(b + (1 if k + 1 == i else 0) for k, b in enumerate(beta))
        else:
            z0 = -l + 1 + self.cal.v_f
            nb = tuple(b - (1 if k + 1 == i else 0) for k, b in enumerate(beta))
        cocycle = self.eps(i, beta) if kind == "E" else self.eps(i, nb)
        energy = sum(n for _, n in mu)
        top = energy + abs(r) + abs(z0) + 2
        cre, _ = self._coeffs(kind, top)
        out: Vector = {}
        # creation degree k - annihilation degree k' = -r - z0
        for (kp, rest), ca in self._annihilation_part(kind, i, mu, energy).items():
            k = kp - r - z0
            if k < 0:
                continue
            for part, cc in _creation_series(cre, k):
                new_mu = tuple(sorted(rest + tuple((i, p) for p in part)))
                _add(out, (nb, new_mu), ca * cc * cocycle)
        return tuple(out.items())

    def apply_vertex(self, vec: Vector, kind: str, i: int, r: int) -> Vector:
        out: Vector = {}
        for st, c in vec.items():
            for k, v in self._E(kind, i, r, st):
                _add(out, k, c * v)
        return out


def _colored_partitions(n: int, colors: int) -> list[tuple]:
    """Multisets of (color, part) with total part size n, as sorted tuples."""
    out = []

    def rec(remaining, color, acc):
        if color > colors:
            if remaining == 0:
                out.append(tuple(sorted(acc)))
            return
        for k in range(remaining + 1):
            for mu in _partitions(k):
                rec(remaining - k, color + 1, acc + [(color, p) for p in mu])

    rec(n, 1, [])
    return out


# evaluation -------------------------------------------------------------------

_ROUND_VARIANT = {"P": ("P", "(n)"), "P1": ("P", "(1^n)"), "Q": ("Q", "(n)"), "Q1": ("Q", "(1^n)")}
_BRACKET_SHAPE = {"PB": ("P", "[n]"), "PB1": ("P", "[1^n]"), "QB": ("Q", "[n]"), "QB1": ("Q", "[1^n]")}


def apply_letter(rep: FockRep, vec: Vector, g) -> Vector:
    """Action of one algebra letter on a vector."""
    if g.kind in ("E", "F"):
        for _ in range(g.power):
            vec = rep.apply_vertex(vec, g.kind, g.i, g.n)
        if g.power > 1:
            d = qfactorial(g.power)
            vec = {k: v.exact_div(d) for k, v in vec.items()}
        return vec
    if g.kind in _ROUND_VARIANT:
        if g.n == 0:
            return vec
        kind, variant = _ROUND_VARIANT[g.kind]
        return rep.apply_heis(vec, mode(rep.heis, kind, variant, g.i, g.n))
    kind, shape = _BRACKET_SHAPE[g.kind]
    return rep.apply_heis(vec, _bracket(rep.heis, kind, shape, g.i, g.n))


@lru_cache(maxsize=None)
def _bracket(heis, kind, shape, i, n):
    return bracket_mode(heis, kind, shape, i, n)


def apply_word(rep: FockRep, vec: Vector, letters) -> Vector:
    for g in reversed(letters):
        vec = apply_letter(rep, vec, g)
        if not vec:
            break
    return vec


def evaluate_on(rep: FockRep, x: AlgElement, state: State) -> Vector:
    """x applied to one basis state; words whose source differs from the state's weight act by zero."""
    return _evaluate(rep, x, state)[0]


def _evaluate(rep, x, state):
    lam = rep.weight(state)
    out: Vector = {}
    active = 0
    for w, c in x.terms.items():
        if w.source != lam:
            continue
        v = apply_word(rep, {state: ONE}, w.letters)
        active += bool(v)
        for k, val in v.items():
            _add(out, k, c * val)
    return out, active


@dataclass
class Verdict:
    """Outcome of one evaluation.

    ``active`` counts (state, word) pairs on which a single word of the body
    acts by a nonzero vector; an instance with ``active == 0`` passes vacuously.
    """

    ok: bool
    residual_entries: int
    states_tested: int
    active: int = 0
    offending: list = field(default_factory=list)

    def as_dict(self):
        return {"ok": self.ok, "residual_entries": self.residual_entries,
                "states_tested": self.states_tested, "active": self.active,
                "offending": [[repr(s), repr(t), str(c)] for s, t, c in self.offending]}


def verify_body(rep: FockRep, body: AlgElement, max_energy: int | None = None, keep: int = 3) -> Verdict:
    """Evaluate ``body`` on every basis state of each of its source weights."""
    if max_energy is None:
        max_energy = rep.cfg.truncation
    sources = sorted({w.source for w in body.terms})
    count, tested, active, bad = 0, 0, 0, []
    for lam in sources:
        for st in rep.states_of_weight(lam, max_energy):
            tested += 1
            res, a = _evaluate(rep, body, st)
            active += a
            count += len(res)
            for t, c in res.items():
                if len(bad) < keep:
                    bad.append((st, t, c))
    return Verdict(count == 0, count, tested, active, bad)


def verify_routing(rep: FockRep, letter, source: Weight, target: Weight,
                   max_energy: int | None = None, keep: int = 3) -> Verdict:
    """The letter applied to weight-``source`` states lands in weight ``target`` only."""
    if max_energy is None:
        max_energy = rep.cfg.truncation
    count, tested, active, bad = 0, 0, 0, []
    for st in rep.states_of_weight(source, max_energy):
        tested += 1
        out = apply_letter(rep, {st: ONE}, letter)
        active += bool(out)
        for t, c in out.items():
            if rep.weight(t) != target:
                count += 1
                if len(bad) < keep:
                    bad.append((st, t, c))
    return Verdict(count == 0, count, tested, active, bad)


def verify_instance(rep: FockRep, inst, max_energy: int | None = None) -> Verdict:
    if inst.claim is not None:
        return verify_routing(rep, *inst.claim, max_energy=max_energy)
    return verify_body(rep, inst.body, max_energy)


def check_grading(rep: FockRep, letters, state: State, c: int = 1) -> bool:
    """Every output state of a word must carry the routed target weight."""
    from .algebra import Algebra, Word
    alg = Algebra(rep.datum, c)
    target = alg.target(Word(rep.weight(state), tuple(letters)))
    return all(rep.weight(t) == target for t in apply_word(rep, {state: ONE}, letters))


def default_weights(rep: FockRep) -> list[Weight]:
    """Five weights of the level-one module around the base vertex.

    They mix positive and negative values of <lambda, i> and energies up to
    two, so that loop generators of both signs of index act nontrivially.
    """
    r, i0 = rep.rank, rep.i0
    unit = lambda k, s=1: tuple(s if a + 1 == k else 0 for a in range(r))
    zero = (0,) * r
    other = r if r != i0 else 1
    picks = [(zero, 0), (zero, 2), (unit(i0), 1), (unit(i0, -1), 1)]
    picks.append((unit(i0, -1), 2) if r == 1 else (unit(other, -1), 1))
    base = unit(i0)
    return [Weight(base, b, rep.top_degree(b) - e) for b, e in picks]


def vacuum_weights(rep: FockRep, radius: int = 1) -> list[Weight]:
    base = tuple(1 if a + 1 == rep.i0 else 0 for a in range(rep.rank))
    out = []
    for beta in itertools.product(range(-radius, radius + 1), repeat=rep.rank):
        out.append(Weight(base, beta, rep.top_degree(beta)))
    return out


# calibration -------------------------------------------------------------------

CALIBRATION_FAMILIES = ("minimal.2", "minimal.3", "minimal.4")


def calibration_candidates(spread: int = 1) -> list[Calibration]:
    rng = range(-spread, spread + 1)
    return [Calibration(e, f, s) for e in rng for f in rng for s in (1, -1)]


def calibrate(datum: CartanDatum, families=CALIBRATION_FAMILIES, index_bound: int = 2,
              candidates=None) -> list[Calibration]:
    """All candidate calibrations under which the given families vanish on the vacua."""
    from .algebra import Algebra
    from .presentations import Window, enumerate_instances
    win = Window(lo=-index_bound, hi=index_bound)
    alg = Algebra(datum, 1)
    passing = []
    for cal in candidates or calibration_candidates():
        rep = FockRep(RepConfig(datum=datum, calibration=cal))
        weights = vacuum_weights(rep)
        if all(verify_instance(rep, inst).ok
               for fid in families for inst in enumerate_instances(fid, alg, win, weights)):
            passing.append(cal)
    return passing


# renormalized relations ------------------------------------------------------------

def verify_renormalized(rep: FockRep, inst, max_energy: int | None = None) -> Verdict:
    """Check a renormalized instance by pulling it back along the renormalization map."""
    from .algebra import renormalize
    if inst.claim is not None:
        return verify_routing(rep, *inst.claim, max_energy=max_energy)
    return verify_body(rep, renormalize(inst.body, inverse=True), max_energy)


# mutations --------------------------------------------------------------------

@dataclass(frozen=True)
class Mutation:
    """Multiply the coefficient of the first matching term of each body by ``factor``."""

    name: str
    family: str
    match: object   # (Word, LaurentPoly) -> bool
    factor: LaurentPoly

    def apply(self, body: AlgElement) -> AlgElement | None:
        for w in sorted(body.terms, key=lambda w: (w.source, len(w.letters), w.letters)):
            if self.match(w, body.terms[w]):
                terms = dict(body.terms)
                terms[w] = terms[w] * self.factor
                return AlgElement(body.alg, terms)
        return None


def _has(kind, length=None):
    return lambda w, c: any(g.kind == kind for g in w.letters) and (length is None or len(w.letters) == length)


def _coef_is(p):
    return lambda w, c: c == p


MUTATIONS = (
    Mutation("swap coefficient q^2 -> q^3", "reduced.4", _coef_is(-qpow(2)), qpow(1)),
    Mutation("scalar [l + ac] shifted by q", "reduced.3", lambda w, c: not w.letters, qpow(1)),
    Mutation("Q-bracket coefficient times q", "reduced.3", _has("QB1"), qpow(1)),
    Mutation("P-bracket coefficient negated", "vertex.7", _has("PB1"), -ONE),
    Mutation("quadratic q^2 -> q^3", "vertex.8", _coef_is(-qpow(2)), qpow(1)),
    Mutation("bracket a = 0 image [2] times q", "vertex.6:signfix", lambda w, c: len(w.letters) == 1, qpow(1)),
    Mutation("bracket a > 0 coefficient times q", "vertex.6:signfix",
             lambda w, c: len(w.letters) == 2 and c in (-qpow(2), qpow(-2), -qpow(-2), qpow(2)), qpow(1)),
    Mutation("Sym^1 coefficient times q", "vertex.4",
             lambda w, c: len(w.letters) == 2 and w.letters[0].n and c.max_degree() > 0, qpow(1)),
    Mutation("minimal rescaling off by q", "minimal.2", _has("E", 2), qpow(1)),
    Mutation("divided-power q^{r-1} -> q^r", "divpow.1", lambda w, c: not any(g.is_heis for g in w.letters), qpow(1)),
    Mutation("divided-power sign flipped", "divpow.3", lambda w, c: not any(g.is_heis for g in w.letters), -ONE),
    Mutation("Heisenberg scalar [2][c] times q", "wtone:commutator", lambda w, c: not w.letters, qpow(1)),
)


def run_mutation(rep: FockRep, mutation: Mutation, window=None, weights=None) -> tuple[bool, str]:
    """True if the mutated family leaves a nonzero residual on some instance."""
    from .algebra import Algebra
    from .presentations import DEFAULT_WINDOW, enumerate_instances
    alg = Algebra(rep.datum, 1)
    for inst in enumerate_instances(mutation.family, alg, window or DEFAULT_WINDOW,
                                    weights or default_weights(rep)):
        body = mutation.apply(inst.body)
        if body is not None and not verify_body(rep, body).ok:
            return True, inst.describe()
    return False, ""
