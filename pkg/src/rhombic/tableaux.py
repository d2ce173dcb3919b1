"""Rhombic staircase tableaux: maximal tilings, enumeration and weights.

Coordinates. Positions p = 1..N follow the type word left to right, and the column
for position p is the p-th column counted from the right of the diagram. The
m-th corner (letter 0 or 2) anchors horizontal strip m; its column holds m
squares (heights 1..m, the square at height h lying in horizontal strip m-h+1)
topped by one short rhombus per 1 to its left in the word. A 1-column after n
corners holds n tall rhombi, the one at height h lying in horizontal strip n-h+1.
Squares and short rhombi of a corner column form its vertical strip; tall rhombi
lie in no vertical strip and short rhombi in no horizontal strip. A tile at a
larger position sits to the left of one at a smaller position.

Two engines produce the tableaux of a type. ``dfs`` sweeps columns right to
left carrying, per horizontal strip, the Greek class of the nearest letter seen
so far; ``naive`` is a backtracking search over all label assignments that only
consults the declarative rules and recomputes weights from the geometry.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Sequence

from .algebra import NVARS, ONE, ZERO, Monomial, Polynomial, var_index

# exponent-vector slots
_A, _B, _G, _D, _Q, _U, _XI = range(NVARS)


class Label(enum.Enum):
    EMPTY = "empty"
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    DELTA = "delta"
    BETA_U = "beta_u"
    DELTA_Q = "delta_q"
    ALPHA_U = "alpha_u"
    GAMMA_Q = "gamma_q"

    @property
    def greek(self) -> str | None:
        """The Greek letter a label counts as for the emptiness and weight rules."""
        return _GREEK[self]


_GREEK = {
    Label.EMPTY: None,
    Label.ALPHA: "alpha", Label.ALPHA_U: "alpha",
    Label.BETA: "beta", Label.BETA_U: "beta",
    Label.GAMMA: "gamma", Label.GAMMA_Q: "gamma",
    Label.DELTA: "delta", Label.DELTA_Q: "delta",
}

SQUARE_LABELS = (Label.EMPTY, Label.ALPHA, Label.BETA, Label.GAMMA, Label.DELTA)
TALL_LABELS = (Label.EMPTY, Label.BETA_U, Label.DELTA_Q)
SHORT_LABELS = (Label.EMPTY, Label.ALPHA_U, Label.GAMMA_Q)
LABELS_BY_KIND = {"square": SQUARE_LABELS, "tall": TALL_LABELS, "short": SHORT_LABELS}

# weight contributed by a labeled tile, as exponent vectors
_LABEL_EXP = {
    Label.ALPHA: {_A: 1}, Label.BETA: {_B: 1}, Label.GAMMA: {_G: 1}, Label.DELTA: {_D: 1},
    Label.BETA_U: {_B: 1, _U: 1}, Label.DELTA_Q: {_D: 1, _Q: 1},
    Label.ALPHA_U: {_A: 1, _U: 1}, Label.GAMMA_Q: {_G: 1, _Q: 1},
}


def _vec(d: dict[int, int]) -> tuple[int, ...]:
    v = [0] * NVARS
    for k, e in d.items():
        v[k] += e
    return tuple(v)


def empty_square_exp(right: str, below: str) -> tuple[int, ...]:
    if right == "beta":
        return _vec({_U: 1})
    if right == "delta":
        return _vec({_Q: 1})
    return _vec({_U: 1}) if below in ("alpha", "delta") else _vec({_Q: 1})


def empty_tall_exp(right: str) -> tuple[int, ...]:
    if right == "beta":
        return _vec({_U: 2})
    if right == "delta":
        return _vec({_Q: 2})
    return _vec({_U: 1, _Q: 1})


def empty_short_exp(below: str) -> tuple[int, ...]:
    if below == "alpha":
        return _vec({_U: 2})
    if below == "gamma":
        return _vec({_Q: 2})
    return _vec({_U: 1, _Q: 1})


LABEL_EXP = {lab: _vec(d) for lab, d in _LABEL_EXP.items()}


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Type words and tilings
# ---------------------------------------------------------------------------


def parse_type(letters: Sequence[int] | str) -> tuple[int, ...]:
    if isinstance(letters, str):
        letters = [int(ch) for ch in letters.replace(",", "").replace(" ", "")]
    tau = tuple(int(x) for x in letters)
    if any(x not in (0, 1, 2) for x in tau):
        raise ValueError(f"type letters must be 0, 1 or 2: {tau}")
    return tau


def all_types(n: int, r: int) -> list[tuple[int, ...]]:
    """All words in {0,1,2}^n with exactly r ones, in lexicographic order."""
    return [t for t in itertools.product((0, 1, 2), repeat=n) if t.count(1) == r]


@dataclass(frozen=True)
class Tile:
    pos: int
    height: int
    kind: str                 # "square", "tall" or "short"
    hstrip: int | None        # horizontal strip index, 1-based
    vstrip: int | None        # vertical strip index (= corner index), 1-based


@dataclass(frozen=True)
class CornerColumn:
    pos: int
    corner_index: int
    squares: int
    short_rhombi: int


@dataclass(frozen=True)
class OneColumn:
    pos: int
    tall_rhombi: int


@dataclass(frozen=True)
class TilingSpec:
    tau: tuple[int, ...]
    columns: tuple
    tiles: tuple[Tile, ...]
    corners: tuple[int, ...]          # c_1 < c_2 < ... (positions)
    ones: tuple[int, ...]

    @property
    def size(self) -> tuple[int, int]:
        return len(self.tau), len(self.ones)

    def strip_tiles(self, which: str, index: int) -> list[int]:
        """Indices into ``tiles`` of the given horizontal or vertical strip."""
        attr = "hstrip" if which == "h" else "vstrip"
        return [n for n, t in enumerate(self.tiles) if getattr(t, attr) == index]


@lru_cache(maxsize=None)
def build_tiling(tau: tuple[int, ...]) -> TilingSpec:
    tau = parse_type(tau)
    columns, tiles, corners, ones = [], [], [], []
    n02 = n1 = 0
    for p, letter in enumerate(tau, start=1):
        if letter == 1:
            columns.append(OneColumn(p, n02))
            for h in range(1, n02 + 1):
                tiles.append(Tile(p, h, "tall", n02 - h + 1, None))
            ones.append(p)
            n1 += 1
        else:
            n02 += 1
            m = n02
            columns.append(CornerColumn(p, m, m, n1))
            for h in range(1, m + 1):
                tiles.append(Tile(p, h, "square", m - h + 1, m))
            for s in range(1, n1 + 1):
                tiles.append(Tile(p, m + s, "short", None, m))
            corners.append(p)
    return TilingSpec(tau, tuple(columns), tuple(tiles), tuple(corners), tuple(ones))


@dataclass(frozen=True)
class Tableau:
    """A labeling of the maximal tiling; ``labels`` is aligned with ``tiling.tiles``."""

    tiling: TilingSpec
    labels: tuple[Label, ...]
    exponents: tuple[int, ...] = field(compare=False, default=None)

    @property
    def tau(self) -> tuple[int, ...]:
        return self.tiling.tau

    @property
    def heavy(self) -> int:
        return self.tau.count(2)

    def weight(self) -> Monomial:
        if self.exponents is None:
            return weight(self)
        return Monomial(1, self.exponents)

    def to_json(self) -> dict:
        return {
            "type": list(self.tau),
            "labels": [
                {"pos": t.pos, "height": t.height, "kind": t.kind, "label": lab.value}
                for t, lab in zip(self.tiling.tiles, self.labels)
            ],
            "weight": self.weight().to_polynomial().to_json(),
        }


# ---------------------------------------------------------------------------
# DFS engine (strip-state transfer)
# ---------------------------------------------------------------------------

_OPEN = ("alpha", "gamma")           # horizontal strip still accepts letters
_CLOSED_V = ("alpha", "gamma")        # closes a vertical strip
_SQUARE_GREEK = {"alpha": Label.ALPHA, "beta": Label.BETA, "gamma": Label.GAMMA, "delta": Label.DELTA}


@lru_cache(maxsize=None)
def _corner_options(letter: int, m: int, nshort: int, state: tuple[str, ...]):
    """All fillings of a corner column given the classes of strips 1..m-1.

    Returns a tuple of (labels bottom-to-top, new state of strips 1..m, exponents).
    """
    bottoms = ("alpha", "delta") if letter == 2 else ("beta", "gamma")
    out = []
    for b in bottoms:
        # strips above the corner square, from height 2 upward: m-1, m-2, ..., 1
        partial = [((_SQUARE_GREEK[b],), b, list(state), LABEL_EXP[_SQUARE_GREEK[b]])]
        for h in range(2, m + 1):
            s = m - h  # zero-based strip index of strip m-h+1
            nxt = []
            for labels, vcls, hstate, exps in partial:
                right = hstate[s]
                can_label = right in _OPEN and vcls not in _CLOSED_V
                if can_label:
                    for g, lab in _SQUARE_GREEK.items():
                        hs = list(hstate)
                        hs[s] = g
                        nxt.append((labels + (lab,), g, hs, _add(exps, LABEL_EXP[lab])))
                nxt.append((labels + (Label.EMPTY,), vcls, hstate,
                            _add(exps, empty_square_exp(right, vcls))))
            partial = nxt
        for _ in range(nshort):
            nxt = []
            for labels, vcls, hstate, exps in partial:
                if vcls not in _CLOSED_V:
                    for lab in (Label.ALPHA_U, Label.GAMMA_Q):
                        nxt.append((labels + (lab,), lab.greek, hstate, _add(exps, LABEL_EXP[lab])))
                nxt.append((labels + (Label.EMPTY,), vcls, hstate, _add(exps, empty_short_exp(vcls))))
            partial = nxt
        for labels, _vcls, hstate, exps in partial:
            out.append((labels, tuple(hstate) + (b,), exps))
    return tuple(out)


@lru_cache(maxsize=None)
def _one_options(state: tuple[str, ...]):
    n = len(state)
    partial = [((), list(state), (0,) * NVARS)]
    for h in range(1, n + 1):
        s = n - h
        nxt = []
        for labels, hstate, exps in partial:
            right = hstate[s]
            if right in _OPEN:
                for lab in (Label.BETA_U, Label.DELTA_Q):
                    hs = list(hstate)
                    hs[s] = lab.greek
                    nxt.append((labels + (lab,), hs, _add(exps, LABEL_EXP[lab])))
            nxt.append((labels + (Label.EMPTY,), hstate, _add(exps, empty_tall_exp(right))))
        partial = nxt
    return tuple((labels, tuple(hs), exps) for labels, hs, exps in partial)


def _column_options(tiling: TilingSpec, col, state):
    if isinstance(col, OneColumn):
        return _one_options(state)
    letter = tiling.tau[col.pos - 1]
    return _corner_options(letter, col.corner_index, col.short_rhombi, state)


def _iter_dfs(tiling: TilingSpec) -> Iterator[tuple[tuple[Label, ...], tuple[int, ...]]]:
    cols = tiling.columns
    ncols = len(cols)

    def rec(c, state, labels, exps):
        if c == ncols:
            yield labels, exps
            return
        for lab, new_state, e in _column_options(tiling, cols[c], state):
            yield from rec(c + 1, new_state, labels + lab, _add(exps, e))

    yield from rec(0, (), (), (0,) * NVARS)


def _tile_order_dfs(tiling: TilingSpec) -> list[int]:
    # dfs emits column by column, each column bottom-up: the same order as tiling.tiles
    return list(range(len(tiling.tiles)))


# ---------------------------------------------------------------------------
# Naive engine (declarative constraints, independent weights)
# ---------------------------------------------------------------------------


def _constraints(tiling: TilingSpec):
    """Pairs (a, b): if tile a holds a closing letter then tile b must be empty."""
    tiles = tiling.tiles
    pairs = []
    for a, ta in enumerate(tiles):
        for b, tb in enumerate(tiles):
            if a == b:
                continue
            if ta.vstrip is not None and ta.vstrip == tb.vstrip and tb.height > ta.height:
                pairs.append((a, b, "v"))
            if ta.hstrip is not None and ta.hstrip == tb.hstrip and tb.pos > ta.pos:
                pairs.append((a, b, "h"))
    return pairs


def check_tableau(tiling: TilingSpec, labels: Sequence[Label]) -> list[str]:
    """Return the list of violated rules (empty for a valid tableau of type tiling.tau)."""
    problems = []
    for t, lab in zip(tiling.tiles, labels):
        if lab not in LABELS_BY_KIND[t.kind]:
            problems.append(f"label {lab.value} not allowed on {t.kind} at {t.pos},{t.height}")
        if t.kind == "square" and t.height == 1:
            letter = tiling.tau[t.pos - 1]
            want = ("alpha", "delta") if letter == 2 else ("beta", "gamma")
            if lab.greek not in want:
                problems.append(f"corner square at position {t.pos} holds {lab.value}")
    for a, b, kind in _constraints(tiling):
        g = labels[a].greek
        closing = ("alpha", "gamma") if kind == "v" else ("beta", "delta")
        if g in closing and labels[b] is not Label.EMPTY:
            problems.append(f"tile {tiling.tiles[b]} must be empty ({kind}-strip)")
    return problems


def naive_weight(tiling: TilingSpec, labels: Sequence[Label]) -> tuple[int, ...]:
    """Weight exponents computed by scanning strips for the nearest labeled tile."""
    tiles = tiling.tiles
    exps = [0] * NVARS
    for n, (t, lab) in enumerate(zip(tiles, labels)):
        if lab is not Label.EMPTY:
            for k, e in enumerate(LABEL_EXP[lab]):
                exps[k] += e
            continue
        right = below = None
        if t.hstrip is not None:
            cands = [(tiles[m].pos, labels[m]) for m in range(len(tiles))
                     if tiles[m].hstrip == t.hstrip and tiles[m].pos < t.pos
                     and labels[m] is not Label.EMPTY]
            if not cands:
                raise AssertionError(f"empty tile {t} sees no label to its right")
            right = max(cands, key=lambda x: x[0])[1].greek
        if t.vstrip is not None:
            cands = [(tiles[m].height, labels[m]) for m in range(len(tiles))
                     if tiles[m].vstrip == t.vstrip and tiles[m].height < t.height
                     and labels[m] is not Label.EMPTY]
            if not cands:
                raise AssertionError(f"empty tile {t} sees no label below")
            below = max(cands, key=lambda x: x[0])[1].greek
        if t.kind == "square":
            e = empty_square_exp(right, below)
        elif t.kind == "tall":
            e = empty_tall_exp(right)
        else:
            e = empty_short_exp(below)
        for k, x in enumerate(e):
            exps[k] += x
    return tuple(exps)


def _iter_naive(tiling: TilingSpec) -> Iterator[tuple[Label, ...]]:
    tiles = tiling.tiles
    n = len(tiles)
    # assign top-left tiles first; any order is valid
    order = sorted(range(n), key=lambda k: (-tiles[k].pos, -tiles[k].height))
    rank = {k: i for i, k in enumerate(order)}
    checks: list[list[tuple[int, int, str]]] = [[] for _ in range(n)]
    for a, b, kind in _constraints(tiling):
        checks[order[max(rank[a], rank[b])]].append((a, b, kind))
    labels: list[Label | None] = [None] * n

    def options(k):
        t = tiles[k]
        if t.kind == "square" and t.height == 1:
            return ((Label.ALPHA, Label.DELTA) if tiling.tau[t.pos - 1] == 2
                    else (Label.BETA, Label.GAMMA))
        return LABELS_BY_KIND[t.kind]

    def ok(k):
        for a, b, kind in checks[k]:
            closing = ("alpha", "gamma") if kind == "v" else ("beta", "delta")
            if labels[a].greek in closing and labels[b] is not Label.EMPTY:
                return False
        return True

    def rec(i):
        if i == n:
            yield tuple(labels)
            return
        k = order[i]
        for lab in options(k):
            labels[k] = lab
            if ok(k):
                yield from rec(i + 1)
        labels[k] = None

    yield from rec(0)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def enumerate_tableaux(tau, engine: str = "dfs") -> list[Tableau]:
    tiling = build_tiling(parse_type(tau))
    if engine == "dfs":
        return [Tableau(tiling, labels, exps) for labels, exps in _iter_dfs(tiling)]
    if engine == "naive":
        return [Tableau(tiling, labels, naive_weight(tiling, labels)) for labels in _iter_naive(tiling)]
    raise ValueError(f"unknown engine {engine!r}")


def iter_weights(tau) -> Iterator[tuple[int, ...]]:
    """Weight exponent vectors of all tableaux of a type, without building Tableau objects."""
    tiling = build_tiling(parse_type(tau))
    for _labels, exps in _iter_dfs(tiling):
        yield exps


def weight(t: Tableau) -> Monomial:
    """Weight of a tableau, recomputed from its labels."""
    problems = check_tableau(t.tiling, t.labels)
    if problems:
        raise ValueError("invalid tableau: " + "; ".join(problems))
    return Monomial(1, naive_weight(t.tiling, t.labels))


def _type_dp(tau: tuple[int, ...], mode: str):
    """Memoized sweep over (column, strip state) summing counts or weights."""
    tiling = build_tiling(tau)
    cols = tiling.columns
    ncols = len(cols)

    @lru_cache(maxsize=None)
    def rec(c, state):
        if c == ncols:
            return 1 if mode == "count" else ONE
        total = 0 if mode == "count" else ZERO
        for _lab, new_state, e in _column_options(tiling, cols[c], state):
            sub = rec(c + 1, new_state)
            if mode == "count":
                total += sub
            else:
                total = total + Polynomial.from_exponents(e) * sub
        return total

    return rec(0, ())


@lru_cache(maxsize=None)
def count_tableaux(tau) -> int:
    """Number of tableaux of a type (dfs engine, memoized on strip state)."""
    return _type_dp(parse_type(tau), "count")


@lru_cache(maxsize=None)
def type_generating_function(tau) -> Polynomial:
    """Sum of w(T) over all tableaux of type tau (dfs engine, memoized)."""
    return _type_dp(parse_type(tau), "poly")


def partition_function(n: int, r: int, track_xi: bool = False) -> Polynomial:
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= N")
    total = ZERO
    for tau in all_types(n, r):
        gf = type_generating_function(tau)
        if track_xi and tau.count(2):
            gf = gf * Polynomial.var("xi", tau.count(2))
        total = total + gf
    return total


def tableau_count_formula(n: int, r: int) -> int:
    return 4 ** (n - r) * (factorial(n) // factorial(r)) * comb(n, r)


def q1_closed_form(n: int, r: int) -> Polynomial:
    """C(N,r) * prod_{i=r}^{N-1} (α+β+γ+δ + i(α+γ)(β+δ))."""
    a, b, g, d = (Polynomial.var(v) for v in ("alpha", "beta", "gamma", "delta"))
    out = Polynomial.constant(comb(n, r))
    for i in range(r, n):
        out = out * (a + b + g + d + (a + g) * (b + d) * i)
    return out


def weight_degree(n: int, r: int) -> int:
    return (n - r) * (n + 3 * r + 1) // 2


def q1_census(n: int, r: int) -> dict:
    count = sum(count_tableaux(t) for t in all_types(n, r))
    z = partition_function(n, r)
    at_one = z.substitute({"q": 1, "u": 1})
    match = at_one == q1_closed_form(n, r) and count == tableau_count_formula(n, r)
    return {"count": count, "closed_form_match": match}


def rehomogenize_u(p: Polynomial, degree: int) -> Polynomial:
    """Restore u in a u=1 specialization of a polynomial homogeneous in (α,β,γ,δ,q,u)."""
    ui = var_index("u")
    out = {}
    for exps, c in p.terms():
        d = sum(exps[:ui + 1])
        if d > degree:
            raise ValueError("term degree exceeds target")
        e = list(exps)
        e[ui] += degree - d
        out[tuple(e)] = c
    return Polynomial(out)
