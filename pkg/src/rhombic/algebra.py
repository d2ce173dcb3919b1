"""Exact arithmetic: sparse integer polynomials in (alpha, beta, gamma, delta, q, u, xi),
and fraction-free linear algebra over the rationals.

Polynomials wrap FLINT's multivariate integer polynomials (via python-flint);
the wrapper fixes the variable set and adds substitution, evaluation and JSON.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint

VARIABLES = ("alpha", "beta", "gamma", "delta", "q", "u", "xi")
NVARS = len(VARIABLES)
_SYMBOLS = {"alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ", "q": "q", "u": "u", "xi": "ξ"}

_CTX = flint.fmpz_mpoly_ctx.get(VARIABLES, "lex")
_QCTX = flint.fmpq_mpoly_ctx.get(VARIABLES, "lex")
_GENS = _CTX.gens()
_QGENS = _QCTX.gens()


def var_index(name: str) -> int:
    try:
        return VARIABLES.index(name)
    except ValueError:
        raise KeyError(f"unknown variable {name!r}") from None


def _check_exps(exps: Sequence[int]) -> tuple[int, ...]:
    if len(exps) != NVARS:
        raise ValueError("exponent tuple must have length 7")
    if any(e < 0 for e in exps):
        raise ValueError("exponents must be non-negative")
    return tuple(int(e) for e in exps)


@dataclass(frozen=True)
class Monomial:
    """A single term: integer coefficient times a power product."""

    coefficient: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("a stored monomial has nonzero coefficient")
        if len(self.exponents) != NVARS:
            raise ValueError("exponent tuple must have length 7")

    @classmethod
    def from_dict(cls, exps: Mapping[str, int], coefficient: int = 1) -> "Monomial":
        e = [0] * NVARS
        for name, k in exps.items():
            e[var_index(name)] += k
        return cls(coefficient, tuple(e))

    def degree(self, ignore: Iterable[str] = ("xi",)) -> int:
        skip = {var_index(v) for v in ignore}
        return sum(e for v, e in enumerate(self.exponents) if v not in skip)

    def to_polynomial(self) -> "Polynomial":
        return Polynomial.from_exponents(self.exponents, self.coefficient)

    def __str__(self):
        return str(self.to_polynomial())


class Polynomial:
    """Immutable sparse polynomial with integer coefficients.

    >>> a, q = Polynomial.var("alpha"), Polynomial.var("q")
    >>> str((a + q) * (a - q))
    'α^2 - q^2'
    """

    __slots__ = ("_p", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None):
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in (terms or {}).items():
            k = _check_exps(exps)
            acc[k] = acc.get(k, 0) + int(c)
        self._p = _CTX.from_dict({k: c for k, c in acc.items() if c})
        self._hash = None

    @classmethod
    def _wrap(cls, p) -> "Polynomial":
        out = cls.__new__(cls)
        out._p = p
        out._hash = None
        return out

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls._wrap(_CTX.from_dict({(0,) * NVARS: int(c)} if c else {}))

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        return cls._wrap(_GENS[var_index(name)] ** power)

    @classmethod
    def from_exponents(cls, exps: Sequence[int], coefficient: int = 1) -> "Polynomial":
        return cls._wrap(_CTX.from_dict({_check_exps(exps): int(coefficient)} if coefficient else {}))

    @classmethod
    def monomial(cls, coefficient: int = 1, **exps: int) -> "Polynomial":
        e = [0] * NVARS
        for name, k in exps.items():
            e[var_index(name)] += k
        return cls.from_exponents(e, coefficient)

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """(exponents, coefficient) pairs, lexicographic on exponents."""
        return sorted((tuple(map(int, e)), int(c)) for e, c in self._p.to_dict().items())

    def monomials(self) -> list[Monomial]:
        return [Monomial(c, e) for e, c in self.terms()]

    def coefficients(self) -> list[int]:
        return [c for _, c in self.terms()]

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __len__(self):
        return len(self._p)

    def __bool__(self):
        return not self._p.is_zero()

    def degrees(self, ignore: Iterable[str] = ("xi",)) -> set[int]:
        """Set of total degrees of the terms, not counting the ignored variables."""
        skip = [var_index(v) for v in ignore]
        return {int(sum(e) - sum(e[v] for v in skip)) for e in self._p.monoms()}

    def max_exponent(self, name: str) -> int:
        if self._p.is_zero():
            return 0
        return int(self._p.degrees()[var_index(name)])

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other._p
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial._wrap(self._p + o)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(-self._p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial._wrap(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial._wrap(self._p * o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        return Polynomial._wrap(self._p ** n)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial._wrap(self._p * int(c))

    def __eq__(self, other):
        if isinstance(other, int):
            return self._p == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._p == other._p

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._p.to_dict().items()))
        return self._hash

    # -- substitution -------------------------------------------------------

    def substitute(self, bindings: Mapping[str, Union[int, Fraction, "Polynomial"]]):
        """Substitute values for variables.

        Values may be ints, Fractions, or Polynomials. Returns a Fraction when all
        seven variables are bound to numbers; otherwise a Polynomial, in which
        case rational values must leave integer coefficients.
        """
        idx = {var_index(name): val for name, val in bindings.items()}
        if len(idx) == NVARS and all(not isinstance(v, Polynomial) for v in idx.values()):
            return self._evaluate([Fraction(idx[v]) for v in range(NVARS)])
        if all(isinstance(v, int) for v in idx.values()):
            return Polynomial._wrap(self._p.subs({VARIABLES[v]: val for v, val in idx.items()}))
        images = []
        for v in range(NVARS):
            val = idx.get(v)
            if val is None:
                images.append(_QGENS[v])
            elif isinstance(val, Polynomial):
                images.append(_QCTX.from_dict(val._p.to_dict()))
            else:
                f = Fraction(val)
                images.append(_QCTX.from_dict({(0,) * NVARS: flint.fmpq(f.numerator, f.denominator)}))
        res = _QCTX.from_dict(self._p.to_dict()).compose(*images)
        out = {}
        for e, c in res.to_dict().items():
            if c.q != 1:
                raise ValueError("rational substitution produced non-integer coefficients; bind all variables")
            out[e] = int(c.p)
        return Polynomial._wrap(_CTX.from_dict(out))

    def _evaluate(self, point: list[Fraction]) -> Fraction:
        if self._p.is_zero():
            return Fraction(0)
        args = [flint.fmpq(x.numerator, x.denominator) for x in map(Fraction, point)]
        val = _QCTX.from_dict(self._p.to_dict())(*args)
        return Fraction(int(val.p), int(val.q))

    def evaluate(self, **values) -> Fraction:
        """Evaluate at a point; unspecified variables default to 1."""
        point = [Fraction(values.get(name, 1)) for name in VARIABLES]
        return self._evaluate(point)

    # -- output -------------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"coeff": str(c), "exp": dict(zip(VARIABLES, e))}
            for e, c in self.terms()
        ]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({tuple(t["exp"].get(v, 0) for v in VARIABLES): int(t["coeff"]) for t in data})

    def __str__(self):
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for e, c in reversed(terms):
            mono = " ".join(
                _SYMBOLS[VARIABLES[v]] + (f"^{x}" if x > 1 else "")
                for v, x in enumerate(e) if x
            )
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag} {mono}".strip() if mono else str(mag))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body.replace(" ", "")))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


ZERO = Polynomial.constant(0)
ONE = Polynomial.constant(1)

alpha = Polynomial.var("alpha")
beta = Polynomial.var("beta")
gamma = Polynomial.var("gamma")
delta = Polynomial.var("delta")
q = Polynomial.var("q")
u = Polynomial.var("u")
xi = Polynomial.var("xi")


def poly_ops(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def eval_substitute(p: Polynomial, bindings):
    return p.substitute(bindings)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or an integer literal; floats are rejected."""
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# Rational linear algebra
# --------------------------------------------------------------------------


class RationalMatrix:
    """Dense matrix of Fractions, row-major."""

    def __init__(self, rows: int, cols: int, entries: Iterable = None):
        self.rows, self.cols = rows, cols
        if entries is None:
            self.entries = [Fraction(0)] * (rows * cols)
        else:
            self.entries = [Fraction(x) for x in entries]
        if len(self.entries) != rows * cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls(n, n)
        for i in range(n):
            m[i, i] = 1
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.entries[i * self.cols + j] = Fraction(value)

    def row(self, i: int) -> list[Fraction]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows)]

    def vecmat(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.rows:
            raise ValueError("shape mismatch")
        out = [Fraction(0)] * self.cols
        for i, vi in enumerate(v):
            if vi:
                for j, a in enumerate(self.row(i)):
                    if a:
                        out[j] += vi * a
        return out

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __repr__(self):
        return f"RationalMatrix({self.to_rows()})"


def _integer_rows(m: RationalMatrix) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators; return rows and scale factors."""
    from math import lcm

    rows, scales = [], []
    for r in m.to_rows():
        s = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * s) for x in r])
        scales.append(s)
    return rows, scales


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form of an integer matrix (in place copy).

    Returns (echelon rows, pivot columns, sign of row permutation). For a square
    nonsingular input the last pivot equals the determinant times the sign.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        piv = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, ncols):
                # exact division is the Bareiss invariant
                ai[j] = (piv * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        # rows above the pivot row in later columns stay untouched
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots, sign


def determinant(m: RationalMatrix) -> Fraction:
    """Exact determinant by Bareiss elimination on the row-scaled integer matrix."""
    if m.rows != m.cols:
        raise ValueError("determinant needs a square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    rows, scales = _integer_rows(m)
    ech, pivots, sign = _bareiss_echelon(rows)
    if len(pivots) < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * ech[n - 1][n - 1], denom)


def kernel(m: RationalMatrix) -> list[list[Fraction]]:
    """Basis of the right null space {v : m v = 0}, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in the other free columns.
    """
    rows, _ = _integer_rows(m)
    ech, pivots, _ = _bareiss_echelon(rows)
    ncols = m.cols
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = ech[r]
            s = sum((row[j] * v[j] for j in range(c + 1, ncols) if row[j] and v[j]), Fraction(0))
            v[c] = -s / row[c]
        basis.append(v)
    return basis


def exact_linear_solve(m: RationalMatrix, task: str):
    if task == "kernel":
        return kernel(m)
    if task == "determinant":
        return determinant(m)
    raise ValueError(f"unknown task {task!r}")
