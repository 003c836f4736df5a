"""Cartan data, formal affine weights, both pairings and weight routing.

Weights are kept as formal integer combinations of the symbols
``Lambda_i``, ``alpha_i`` and ``delta``; nothing is ever rewritten in
terms of anything else because the asymmetric pairing is only defined on
these symbols.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path


class DynkinError(ValueError):
    pass


def _edges_for(kind: str, rank: int) -> list[tuple[int, int]]:
    if kind == "A":
        if rank < 1:
            raise DynkinError("A_n needs n >= 1")
        return [(i, i + 1) for i in range(1, rank)]
    if kind == "D":
        if rank < 4:
            raise DynkinError("D_n needs n >= 4")
        return [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    if kind == "E":
        if rank not in (6, 7, 8):
            raise DynkinError("E_n needs n in {6, 7, 8}")
        # Bourbaki labelling: 1-3-4-5-6(-7-8), 2 attached to 4
        chain = [1, 3, 4, 5, 6, 7, 8][: rank - 1]
        return [(a, b) for a, b in zip(chain, chain[1:])] + [(2, 4)]
    raise DynkinError(f"unsupported Cartan type {kind!r} (simply-laced A, D, E only)")


@dataclass(frozen=True)
class CartanDatum:
    """A simply-laced Dynkin diagram with an orientation of its edges.

    ``orientation`` holds directed pairs ``(i, j)`` meaning ``i -> j``.  The
    default points every edge from the lower to the higher label.
    """

    kind: str
    rank: int
    orientation: frozenset = field(default=None)

    def __post_init__(self):
        edges = _edges_for(self.kind, self.rank)
        if self.orientation is None:
            object.__setattr__(self, "orientation", frozenset(edges))
        orient = frozenset(tuple(e) for e in self.orientation)
        object.__setattr__(self, "orientation", orient)
        undirected = {frozenset(e) for e in edges}
        got = [frozenset(e) for e in orient]
        if len(got) != len(set(got)) or set(got) != undirected:
            raise DynkinError("orientation must cover each Dynkin edge exactly once")

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @cached_property
    def _index(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def index(self, i: int) -> int:
        return self._index[i]

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        C = [[0] * n for _ in range(n)]
        for k in range(n):
            C[k][k] = 2
        for a, b in self.orientation:
            C[a - 1][b - 1] = C[b - 1][a - 1] = -1
        return tuple(tuple(r) for r in C)

    def C(self, i: int, j: int) -> int:
        return self.cartan[i - 1][j - 1]

    def adjacent(self, i: int, j: int) -> bool:
        return self.C(i, j) == -1

    def pairs(self, relation: str):
        """Ordered vertex pairs with ``relation`` in {'same', 'adjacent', 'orthogonal'}."""
        out = []
        for i in self.vertices:
            for j in self.vertices:
                c = self.C(i, j)
                if (relation == "same" and i == j) or (relation == "adjacent" and c == -1) \
                        or (relation == "orthogonal" and i != j and c == 0):
                    out.append((i, j))
        return out

    def asym(self, i: int, j: int) -> int:
        """The orientation table on simple roots: 1 if i = j, -1 if i -> j, else 0."""
        if i == j:
            return 1
        return -1 if (i, j) in self.orientation else 0

    def reoriented(self, flip: set | frozenset) -> "CartanDatum":
        """Copy with the edges listed in ``flip`` (as unordered pairs) reversed."""
        flip = {frozenset(e) for e in flip}
        orient = {(b, a) if frozenset((a, b)) in flip else (a, b) for a, b in self.orientation}
        return CartanDatum(self.kind, self.rank, frozenset(orient))

    def all_orientations(self):
        edges = sorted(self.orientation)
        for mask in range(2 ** len(edges)):
            yield self.reoriented({edges[k] for k in range(len(edges)) if mask >> k & 1})


def cartan(name: str, orientation=None) -> CartanDatum:
    """``cartan("A2")`` style constructor."""
    kind, rank = name[0].upper(), int(name[1:])
    return CartanDatum(kind, rank, None if orientation is None else frozenset(orientation))


@dataclass(frozen=True, order=True)
class Weight:
    """Formal combination sum lam_i Lambda_i + sum alpha_i alpha_i + delta * delta."""

    lam: tuple[int, ...]
    alpha: tuple[int, ...]
    delta: int = 0

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank, (0,) * rank, 0)

    @classmethod
    def fundamental(cls, rank: int, i: int) -> "Weight":
        lam = [0] * rank
        lam[i - 1] = 1
        return cls(tuple(lam), (0,) * rank, 0)

    @classmethod
    def simple_root(cls, rank: int, i: int) -> "Weight":
        a = [0] * rank
        a[i - 1] = 1
        return cls((0,) * rank, tuple(a), 0)

    @classmethod
    def delta_(cls, rank: int, k: int = 1) -> "Weight":
        return cls((0,) * rank, (0,) * rank, k)

    @property
    def rank(self) -> int:
        return len(self.lam)

    @property
    def level(self) -> int:
        """<lambda, delta>; equals the sum of the Lambda-coefficients."""
        return sum(self.lam)

    def is_root_side(self) -> bool:
        return not any(self.lam)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.lam, other.lam)),
                      tuple(a + b for a, b in zip(self.alpha, other.alpha)),
                      self.delta + other.delta)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.lam), tuple(-a for a in self.alpha), -self.delta)

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def __rmul__(self, k: int) -> "Weight":
        return Weight(tuple(k * a for a in self.lam), tuple(k * a for a in self.alpha), k * self.delta)

    def add_alpha(self, i: int, k: int = 1) -> "Weight":
        a = list(self.alpha)
        a[i - 1] += k
        return Weight(self.lam, tuple(a), self.delta)

    def add_delta(self, k: int) -> "Weight":
        return Weight(self.lam, self.alpha, self.delta + k)

    def __str__(self) -> str:
        return render_weight(self)


def render_weight(w: Weight) -> str:
    parts = []
    for sym, vec in (("L", w.lam), ("a", w.alpha)):
        for k, v in enumerate(vec, start=1):
            if v:
                parts.append(f"{v:+d}{sym}{k}")
    if w.delta:
        parts.append(f"{w.delta:+d}d")
    return "".join(parts) if parts else "0"


def parse_weight(text: str, rank: int) -> Weight:
    """Parse ``+1L1-2a1+3d`` (also accepts the glyphs Λ, α, δ)."""
    import re

    s = text.replace("Λ", "L").replace("α", "a").replace("δ", "d").replace(" ", "")
    if s in ("", "0"):
        return Weight.zero(rank)
    lam, alpha, dl = [0] * rank, [0] * rank, 0
    pos = 0
    for m in re.finditer(r"([+-]?\d*)([Lad])(\d*)", s):
        if m.start() != pos:
            raise ValueError(f"cannot parse weight {text!r}")
        pos = m.end()
        c = m.group(1)
        c = 1 if c in ("", "+") else -1 if c == "-" else int(c)
        sym, idx = m.group(2), m.group(3)
        if sym == "d":
            if idx:
                raise ValueError(f"cannot parse weight {text!r}")
            dl += c
        else:
            k = int(idx)
            if not 1 <= k <= rank:
                raise ValueError(f"vertex {k} out of range in {text!r}")
            (lam if sym == "L" else alpha)[k - 1] += c
    if pos != len(s):
        raise ValueError(f"cannot parse weight {text!r}")
    return Weight(tuple(lam), tuple(alpha), dl)


def pair_sym(datum: CartanDatum, x: Weight, y: Weight) -> int:
    """The symmetric pairing <x, y>; y must lie in the span of the alpha_i and delta."""
    if not y.is_root_side():
        raise DynkinError("<., Lambda_j> is not defined; second argument must be root-side")
    n = datum.rank
    total = sum(x.lam[k] * y.alpha[k] for k in range(n))  # <Lambda_i, j> = delta_ij
    total += x.level * y.delta  # <Lambda_i, delta> = 1
    total += sum(x.alpha[a] * datum.cartan[a][b] * y.alpha[b] for a in range(n) for b in range(n))
    return total


def pair_asym(datum: CartanDatum, x: Weight, y: Weight) -> int:
    """The orientation-dependent pairing (x, y).

    One argument must be root-side since (Lambda_i, Lambda_j) is never needed
    and is left undefined.
    """
    if not (x.is_root_side() or y.is_root_side()):
        raise DynkinError("(Lambda_i, Lambda_j) is not defined")
    n = datum.rank
    v = datum.vertices
    total = sum(x.lam[k] * y.alpha[k] for k in range(n))  # (Lambda_i, j) = delta_ij; (j, Lambda_i) = 0
    total += x.level * y.delta  # (Lambda_i, delta) = 1; (delta, Lambda_i) = 0
    total += sum(x.alpha[a] * datum.asym(v[a], v[b]) * y.alpha[b] for a in range(n) for b in range(n))
    return total


def ell(datum: CartanDatum, lam: Weight, i: int) -> int:
    """<lambda, alpha_i>."""
    return pair_sym(datum, lam, Weight.simple_root(datum.rank, i))


# routing ----------------------------------------------------------------
# Q-type modes raise the delta-degree and P-type modes lower it, the grading
# under which [Q, E_b] ~ E_{b+1} and [E_a, F_b] ~ Q^{[1^{a+b}]} are homogeneous.

_E_KINDS = {"E"}
_F_KINDS = {"F"}
_P_KINDS = {"P", "P1", "PB", "PB1"}
_Q_KINDS = {"Q", "Q1", "QB", "QB1"}


def shift_vector(rank: int, kind: str, i: int, index: int, c: int, power: int = 1) -> Weight:
    """Weight change produced by one generator letter."""
    if kind in _E_KINDS:
        return Weight((0,) * rank, tuple(power if k == i - 1 else 0 for k in range(rank)), power * index * c)
    if kind in _F_KINDS:
        return Weight((0,) * rank, tuple(-power if k == i - 1 else 0 for k in range(rank)), power * index * c)
    if kind in _Q_KINDS:
        return Weight.delta_(rank, index * c)
    if kind in _P_KINDS:
        return Weight.delta_(rank, -index * c)
    if kind == "1":
        return Weight.zero(rank)
    raise DynkinError(f"unknown generator kind {kind!r}")


def shift(lam: Weight, kind: str, i: int = 1, index: int = 0, c: int = 1, power: int = 1) -> Weight:
    return lam + shift_vector(lam.rank, kind, i, index, c, power)


# configuration ------------------------------------------------------------

@dataclass(frozen=True)
class Config:
    datum: CartanDatum
    level: int = 1
    truncation: int = 8

    @property
    def c(self) -> int:
        return self.level


def parse_orientation(text: str) -> frozenset:
    edges = set()
    for tok in text.replace(",", " ").split():
        a, _, b = tok.partition("->")
        edges.add((int(a), int(b)))
    return frozenset(edges)


def load_config(path: str | Path) -> Config:
    """Read an INI-style file::

        [datum]
        type = A
        rank = 2
        orientation = 2->1
        [run]
        level = 1
        truncation = 8
    """
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise FileNotFoundError(path)
    d = cp["datum"]
    orient = d.get("orientation")
    datum = CartanDatum(d.get("type", "A").upper(), d.getint("rank", 1),
                        parse_orientation(orient) if orient else None)
    run = cp["run"] if cp.has_section("run") else {}
    level = int(run.get("level", 1))
    if level < 1:
        raise DynkinError("level must be a positive integer")
    return Config(datum, level, int(run.get("truncation", 8)))
