"""Transfer matrices D^(t), E^(t), A and the auxiliary strips F^(t), G^(t).

Entries are indexed (i, j, k, l): (i, k) is the row (delta-strips, alpha/gamma
strips before a column is added), (j, l) the column. All matrices live at u = 1.
A product of s letters maps row (i, k) into columns with j + l <= i + k + s, so
row vectors stay finite.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .algebra import ONE, ZERO, Polynomial, alpha, beta, delta, gamma, q, xi

StateVector = dict  # (j, l) -> Polynomial

MATRICES = ("D", "E", "A", "F", "G")
_ONE_MINUS_Q = ONE - q


@lru_cache(maxsize=None)
def qpow(n: int) -> Polynomial:
    if n < 0:
        raise ValueError("negative power of q")
    return q ** n


@lru_cache(maxsize=None)
def q_int(t: int) -> Polynomial:
    """[t]_q = 1 + q + ... + q^(t-1)."""
    return sum((qpow(s) for s in range(t)), ZERO)


@lru_cache(maxsize=None)
def _corner_base(t: int) -> Polynomial:
    return qpow(t) + (alpha + gamma * qpow(t)) * q_int(t)


@lru_cache(maxsize=None)
def D(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    if min(i, j, k, l) < 0 or j < i or l > k + 1:
        return ZERO
    if k == 0 and l == 1 and i == j:
        return alpha * qpow(i)
    if k == 0 and l == 0 and j == i + 1:
        return delta * qpow(i) * _corner_base(t)
    return delta * (D(t, i, j - 1, k - 1, l) + E(t, i, j - 1, k - 1, l)) + D(t, i, j, k - 1, l - 1)


@lru_cache(maxsize=None)
def E(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    if min(i, j, k, l) < 0 or j < i or l > k + 1:
        return ZERO
    if k == 0 and l == 1 and i == j:
        return gamma * qpow(2 * t + i)
    if k == 0 and l == 0 and i == j:
        return beta * qpow(i) * _corner_base(t)
    return beta * (D(t, i, j, k - 1, l) + E(t, i, j, k - 1, l)) + q * E(t, i, j, k - 1, l - 1)


@lru_cache(maxsize=None)
def A(i: int, j: int, k: int, l: int) -> Polynomial:
    if min(i, j, k, l) < 0 or l > k or j - i > k - l:
        return ZERO
    if i == j and k == 0 and l == 0:
        return qpow(2 * i)
    return beta * A(i, j, k - 1, l) + delta * q * A(i, j - 1, k - 1, l) + q * A(i, j, k - 1, l - 1)



def f_recurrence(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    """Right-hand side of the F recurrence, applied without the zero-region shortcut."""
    term = delta * E(t, i, j - 1, k - 1, l) + F(t, i, j, k - 1, l - 1)
    if k == l and i == j - 1:
        term = term - gamma * delta * qpow(2 * t + i + k - 1)
    return term


def g_recurrence(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    term = beta * D(t, i, j, k - 1, l) + q * G(t, i, j, k - 1, l - 1)
    if k == l and i == j:
        term = term - alpha * beta * qpow(i)
    return term


@lru_cache(maxsize=None)
def F(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    # zero region as derived combinatorially: the strip adds a delta-strip and uses up an alpha/gamma strip
    if min(i, j, k, l) < 0 or j <= i or l >= k:
        return ZERO
    return f_recurrence(t, i, j, k, l)


@lru_cache(maxsize=None)
def G(t: int, i: int, j: int, k: int, l: int) -> Polynomial:
    if min(i, j, k, l) < 0 or j <= i or l >= k:
        return ZERO
    return g_recurrence(t, i, j, k, l)


@dataclass(frozen=True)
class EntryKey:
    matrix: str
    i: int
    j: int
    k: int
    l: int
    t: int = 0


def entry(key: EntryKey) -> Polynomial:
    m = key.matrix
    if m == "A":
        return A(key.i, key.j, key.k, key.l)
    fn = {"D": D, "E": E, "F": F, "G": G}.get(m)
    if fn is None:
        raise ValueError(f"unknown matrix {m!r}")
    return fn(key.t, key.i, key.j, key.k, key.l)


def a_closed_form(i: int, j: int, k: int, l: int) -> Polynomial:
    """δ^(j-i) β^(k-l-(j-i)) q^(l+i+j) C(k,l) C(k-l,j-i); zero outside the binomial range."""
    d = j - i
    if min(i, j, k, l) < 0 or d < 0 or l > k or d > k - l:
        return ZERO
    return (delta ** d) * (beta ** (k - l - d)) * qpow(l + i + j) * (comb(k, l) * comb(k - l, d))


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

Token = tuple  # (matrix, superscript) ; superscript is None for A


@dataclass(frozen=True)
class WordSpec:
    """A word in A, D^(s), E^(s) whose superscripts count the preceding A's plus ``offset``."""

    letters: str
    offset: int = 0
    superscripts: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if any(ch not in "ADE" for ch in self.letters):
            raise ValueError(f"word letters must be A, D or E: {self.letters!r}")
        if self.superscripts is not None:
            want = compatible_superscripts(self.letters, self.offset)
            if len(self.superscripts) != len(self.letters):
                raise ValueError("one superscript per letter")
            for n, (ch, s, w) in enumerate(zip(self.letters, self.superscripts, want)):
                if ch != "A" and s != w:
                    raise ValueError(
                        f"letter {n + 1} ({ch}^({s})) violates A-compatibility; expected superscript {w}")

    @classmethod
    def parse(cls, text: str, offset: int = 0) -> "WordSpec":
        """Parse e.g. "D(0) A E(1)" or "DAE"; explicit superscripts are validated."""
        tokens = re.findall(r"([ADE])(?:\^?\((\d+)\))?", text.replace(" ", ""))
        letters = "".join(t[0] for t in tokens)
        if any(t[1] for t in tokens):
            sups = tuple(None if ch == "A" else int(s) if s else None
                         for ch, s in tokens)
            want = compatible_superscripts(letters, offset)
            sups = tuple(w if s is None else s for s, w in zip(sups, want))
            return cls(letters, offset, sups)
        return cls(letters, offset)

    @property
    def tokens(self) -> tuple[Token, ...]:
        return compat_tokens(self.letters, self.offset)

    @property
    def n_a(self) -> int:
        return self.letters.count("A")

    @property
    def n_d(self) -> int:
        return self.letters.count("D")

    @property
    def norm(self) -> int:
        return norm(self.letters)

    def tau(self) -> tuple[int, ...]:
        return word_to_type(self.letters)

    def __str__(self):
        return "".join(m if s is None else f"{m}({s})" for m, s in self.tokens) or "ε"


def compatible_superscripts(letters: str, offset: int = 0) -> tuple:
    out, a = [], 0
    for ch in letters:
        if ch == "A":
            out.append(None)
            a += 1
        else:
            out.append(offset + a)
    return tuple(out)


def compat_tokens(letters: str, offset: int = 0) -> tuple[Token, ...]:
    return tuple(zip(letters, compatible_superscripts(letters, offset)))


def norm(letters: str) -> int:
    return len(letters) + letters.count("A")


def type_to_word(tau: Sequence[int]) -> str:
    return "".join("EAD"[x] for x in tau)


def word_to_type(letters: str) -> tuple[int, ...]:
    return tuple("EAD".index(ch) for ch in letters)


def words(max_len: int, min_len: int = 0) -> Iterable[str]:
    for n in range(min_len, max_len + 1):
        for w in itertools.product("ADE", repeat=n):
            yield "".join(w)


def words_up_to_norm(max_norm: int) -> list[str]:
    out = []
    for n in range(max_norm + 1):
        for w in itertools.product("ADE", repeat=n):
            s = "".join(w)
            if norm(s) <= max_norm:
                out.append(s)
    return out


def _matrix_fn(token: Token):
    m, s = token
    if m == "A":
        return A
    fn = {"D": D, "E": E, "F": F, "G": G}[m]
    return lambda i, j, k, l: fn(s, i, j, k, l)


@lru_cache(maxsize=None)
def _matrix_row(token: Token, i: int, k: int, jmax: int | None) -> tuple:
    """Nonzero entries ((j, l), raw poly) of row (i, k) of one matrix."""
    fn = _matrix_fn(token)
    top = i + k + 2 if jmax is None else min(i + k + 2, jmax + 1)
    out = []
    for j in range(i, top):
        for l in range(0, i + k + 2 - j):
            m = fn(i, j, k, l)
            if m:
                out.append(((j, l), m._p))
    return tuple(out)


def _apply_raw(vec: dict, token: Token, jmax: int | None) -> dict:
    out: dict = {}
    for (i, k), c in vec.items():
        for key, m in _matrix_row(token, i, k, jmax):
            prev = out.get(key)
            out[key] = c * m if prev is None else prev + c * m
    return {key: v for key, v in out.items() if not v.is_zero()}


def apply(vec: StateVector, token: Token, jmax: int | None = None) -> StateVector:
    """Row vector times one matrix: (vM)_{j,l} = sum_{i,k} v_{i,k} M_{i,j,k,l}.

    Every matrix has j >= i, so dropping columns with j > jmax is exact for
    all entries that are kept.
    """
    raw = _apply_raw({key: c._p for key, c in vec.items() if c}, token, jmax)
    return {key: Polynomial._wrap(v) for key, v in raw.items()}


@lru_cache(maxsize=None)
def _row(tokens: tuple[Token, ...], i: int, k: int, jmax: int | None) -> dict:
    if not tokens:
        return {(i, k): ONE._p}
    return _apply_raw(_row(tokens[:-1], i, k, jmax), tokens[-1], jmax)


def row(tokens: Sequence[Token], i: int, k: int, jmax: int | None = None) -> StateVector:
    """Row (i, k) of a product of matrices, as a sparse vector over (j, l).

    With ``jmax`` set, only columns j <= jmax are computed (and returned).
    """
    return {key: Polynomial._wrap(v) for key, v in _row(tuple(tokens), i, k, jmax).items()}


def product_entry(tokens: Sequence[Token], i: int, j: int, k: int, l: int) -> Polynomial:
    if min(i, j, k, l) < 0:
        return ZERO
    return row(tokens, i, k).get((j, l), ZERO)


def _as_word(x) -> WordSpec:
    if isinstance(x, WordSpec):
        return x
    if isinstance(x, (tuple, list)):
        return WordSpec(type_to_word(x))
    return WordSpec.parse(x)


def w_row(x) -> StateVector:
    """<W|X for an A-compatible word X."""
    w = _as_word(x)
    if w.offset:
        raise ValueError("<W|X needs an A-compatible word (offset 0)")
    vec = row(w.tokens, 0, 0)
    bound = w.norm
    assert all(i + k <= bound for i, k in vec), "support bound violated"
    return vec


def bracket(x) -> Polynomial:
    """<W|X|V>: the sum of the entries of <W|X."""
    return sum(w_row(x).values(), ZERO)


def fugacity_bracket_sum(n: int, r: int) -> Polynomial:
    """Sum over A-compatible words with n letters and r A's of xi^{#D} <W|X|V>."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= N")
    total = ZERO
    for w in itertools.product("ADE", repeat=n):
        s = "".join(w)
        if s.count("A") != r:
            continue
        b = bracket(WordSpec(s))
        total = total + (b * xi ** s.count("D") if "D" in s else b)
    return total


def shift(vec: StateVector, dj: int = 0, dl: int = 0) -> StateVector:
    """v'_{j,l} = v_{j-dj, l-dl}; entries pushed to negative indices drop out."""
    return {(j + dj, l + dl): c for (j, l), c in vec.items() if j + dj >= 0 and l + dl >= 0}


def vadd(*terms: tuple) -> StateVector:
    """Linear combination sum(coeff * vec) of sparse vectors."""
    out: dict = {}
    for coeff, vec in terms:
        for key, c in vec.items():
            out[key] = out.get(key, ZERO) + coeff * c
    return {k: v for k, v in out.items() if v}


def clear_caches() -> None:
    for fn in (D, E, A, F, G, _row, _matrix_row, qpow, q_int, _corner_base):
        fn.cache_clear()


# ---------------------------------------------------------------------------
# Identity registry
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    name: str
    passed: bool
    checked: int
    counterexamples: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "checked": self.checked,
                "counterexamples": self.counterexamples}


DEFAULT_RANGES = {"max_index": 5, "max_t": 2, "max_word": 3, "max_norm": 6}


class _Checker:
    def __init__(self, name: str, limit: int = 20):
        self.name, self.limit = name, limit
        self.checked = 0
        self.bad: list = []

    def vec(self, lhs: StateVector, rhs: StateVector, max_index: int | None = None, **where):
        keys = set(lhs) | set(rhs)
        if max_index is not None:
            keys = {key for key in keys if max(key) <= max_index}
        self.checked += 1
        for key in sorted(keys):
            a, b = lhs.get(key, ZERO), rhs.get(key, ZERO)
            if a != b:
                if len(self.bad) < self.limit:
                    self.bad.append({**where, "j": key[0], "l": key[1], "lhs": str(a), "rhs": str(b)})
                return

    def scalar(self, lhs: Polynomial, rhs: Polynomial, **where):
        self.checked += 1
        if lhs != rhs and len(self.bad) < self.limit:
            self.bad.append({**where, "lhs": str(lhs), "rhs": str(rhs)})

    def report(self) -> IdentityReport:
        return IdentityReport(self.name, not self.bad, self.checked, self.bad)


def _gd() -> Polynomial:
    return gamma * delta


def _ab() -> Polynomial:
    return alpha * beta


def _check_ij_reduction(c: _Checker, rg):
    # whole rows: Y_{i,.,k,.} = q^||Y|| Y_{i-1,.-1,k,.}
    for t in range(rg["max_t"] + 1):
        for y in words_up_to_norm(rg["max_norm"]):
            toks = compat_tokens(y, t)
            factor = qpow(norm(y))
            m = rg["max_index"]
            for i in range(1, m + 1):
                for k in range(m + 1):
                    lhs = row(toks, i, k, m)
                    rhs = {key: factor * v for key, v in shift(row(toks, i - 1, k, m - 1), dj=1).items()
                           if key[1] <= m}
                    c.vec(lhs, rhs, m, word=y, t=t, i=i, k=k)


def _check_f_equals_g(c: _Checker, rg):
    m = rg["max_index"]
    for t in range(rg["max_t"] + 1):
        for i, j, k, l in itertools.product(range(m + 1), repeat=4):
            c.scalar(F(t, i, j, k, l), G(t, i, j, k, l), t=t, i=i, j=j, k=k, l=l)


def _row0(tokens, k, jmax=None):
    return row(tokens, 0, k, jmax)


def _check_commutator(letter: str):
    def check(c: _Checker, rg):
        m = rg["max_index"]
        for t in range(rg["max_t"] + 1):
            x = (letter, t)
            for k in range(m + 1):
                comm = vadd((ONE, _row0((x, ("F", t)), k)), (-ONE, _row0((("F", t), x), k)))
                lhs = {key: _ONE_MINUS_Q * v for key, v in comm.items()}
                base = _row0((x,), k)
                rhs: dict = {}
                for (j, l), v in base.items():
                    rhs[(j, l)] = rhs.get((j, l), ZERO) + (ONE - qpow(j)) * _ab() * v
                    # the E_{0,j-1,k,l} term lands at column (j, l) = (j'+1, l)
                    jj = j + 1
                    coef = _gd() * qpow(2 * t) * (qpow(l + jj - 1) - qpow(k + 1))
                    rhs[(jj, l)] = rhs.get((jj, l), ZERO) + coef * v
                c.vec(lhs, {a: b for a, b in rhs.items() if b}, m, t=t, k=k)
    return check


def _check_commutator_af(c: _Checker, rg):
    m = rg["max_index"]
    for t in range(rg["max_t"] + 1):
        for k in range(m + 1):
            comm = vadd((ONE, _row0((("A", None), ("F", t + 1)), k)),
                        (-ONE, _row0((("F", t), ("A", None)), k)))
            lhs = {key: _ONE_MINUS_Q * v for key, v in comm.items()}
            rhs: dict = {}
            for (j, l), v in _row0((("A", None),), k).items():
                rhs[(j, l)] = rhs.get((j, l), ZERO) + (ONE - qpow(j)) * _ab() * v
                jj = j + 1
                coef = _gd() * qpow(2 * t) * (qpow(l + jj + 1) - qpow(k + 2))
                rhs[(jj, l)] = rhs.get((jj, l), ZERO) + coef * v
            c.vec(lhs, {a: b for a, b in rhs.items() if b}, m, t=t, k=k)


def _check_eq2(c: _Checker, rg):
    m = rg["max_index"]
    for t in range(rg["max_t"] + 1):
        for x in words(rg["max_word"]):
            nx = norm(x)
            xd, xe, xt = compat_tokens(x + "D", t), compat_tokens(x + "E", t), compat_tokens(x, t)
            fx = (("F", t),) + xt
            for k in range(m + 1):
                lhs = vadd((beta, _row0(xd, k)), (-delta, shift(_row0(xe, k), dj=1)))
                rhs = vadd((_ab(), shift(_row0(xt, k), dl=1)),
                           (-_gd() * qpow(2 * t + k + nx), shift(_row0(xt, k), dj=1, dl=1)),
                           (_ONE_MINUS_Q, shift(_row0(fx, k), dl=1)))
                c.vec(lhs, rhs, m, word=x, t=t, k=k)


def _check_eq4(c: _Checker, rg):
    m = rg["max_index"]
    for t in range(rg["max_t"] + 1):
        for x in words(rg["max_word"]):
            nx = norm(x)
            xda, xad = compat_tokens(x + "DA", t), compat_tokens(x + "AD", t)
            xa = compat_tokens(x + "A", t)
            fxa = (("F", t),) + xa
            for k in range(m + 1):
                lhs = vadd((ONE, _row0(xda, k)), (-q, _row0(xad, k)))
                rhs = vadd((_ab(), _row0(xa, k)),
                           (-_gd() * qpow(2 * t + k + 2 + nx), shift(_row0(xa, k), dj=1)),
                           (_ONE_MINUS_Q, _row0(fxa, k)))
                c.vec(lhs, rhs, m, word=x, t=t, k=k)


def _w(letters: str) -> StateVector:
    return row(compat_tokens(letters), 0, 0)


def _check_refined(which: int):
    def check(c: _Checker, rg):
        for x in words(rg["max_word"]):
            nx = norm(x)
            if which == 1:
                lhs = _w(x + "DE")
                dpe = vadd((ONE, _w(x + "D")), (ONE, _w(x + "E")))
                rhs = vadd((q, _w(x + "ED")), (_ab(), dpe), (-_gd() * qpow(nx + 1), shift(dpe, dj=1)))
            elif which == 2:
                lhs = {key: beta * v for key, v in _w(x + "D").items()}
                wx = _w(x)
                rhs = vadd((delta, shift(_w(x + "E"), dj=1)), (_ab(), shift(wx, dl=1)),
                           (-_gd() * qpow(nx), shift(wx, dj=1, dl=1)))
            elif which == 4:
                lhs = _w(x + "DA")
                wxa = _w(x + "A")
                rhs = vadd((q, _w(x + "AD")), (_ab(), wxa), (-_gd() * qpow(nx + 2), shift(wxa, dj=1)))
            else:
                lhs = _w(x + "AE")
                wxa = _w(x + "A")
                rhs = vadd((q, _w(x + "EA")), (_ab(), wxa), (-_gd() * qpow(nx + 2), shift(wxa, dj=1)))
            c.vec(lhs, rhs, word=x)
    return check


def _check_base(c: _Checker, rg):
    m = rg["max_index"]
    a = ("A", None)
    for t in range(rg["max_t"] + 1):
        for k in range(m + 1):
            da = vadd((ONE, _row0((("D", t), a), k)), (-q, _row0((a, ("D", t + 1)), k)))
            ae = vadd((ONE, _row0((a, ("E", t + 1)), k)), (-q, _row0((("E", t), a), k)))
            ak = _row0((a,), k)
            rhs = vadd((_ab(), ak), (-_gd() * qpow(2 * t + k + 2), shift(ak, dj=1)),
                       (_ONE_MINUS_Q, _row0((("F", t), a), k)))
            c.vec(da, rhs, m, t=t, k=k, side="DA-qAD")
            c.vec(ae, rhs, m, t=t, k=k, side="AE-qEA")


IDENTITIES = {
    "ij_reduction": _check_ij_reduction,
    "f_equals_g": _check_f_equals_g,
    "commutator_EF": _check_commutator("E"),
    "commutator_DF": _check_commutator("D"),
    "commutator_AF": _check_commutator_af,
    "eq2": _check_eq2,
    "eq4": _check_eq4,
    "refined_1": _check_refined(1),
    "refined_2": _check_refined(2),
    "refined_4": _check_refined(4),
    "refined_5": _check_refined(5),
    "base_DA_AD_AE_EA": _check_base,
}


def verify_identity(name: str, ranges: dict | None = None) -> IdentityReport:
    """Check one named matrix identity exhaustively over the given index ranges."""
    if name not in IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; known: {', '.join(IDENTITIES)}")
    rg = {**DEFAULT_RANGES, **(ranges or {})}
    c = _Checker(name)
    IDENTITIES[name](c, rg)
    return c.report()


def verify_all(ranges: dict | None = None) -> list[IdentityReport]:
    return [verify_identity(n, ranges) for n in IDENTITIES]
