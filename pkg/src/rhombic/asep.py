"""The two-species ASEP on {0,1,2}^N: exact chains, stationary laws, balance checks
and a seeded Monte Carlo sampler.

Light particles (1) are conserved; heavy particles (2) enter and exit at the
boundaries. Every transition of the discrete-time chain has probability
rate / (N + 1).
"""
from __future__ import annotations

import bisect
import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import networkx as nx
import numpy as np

from .algebra import ONE, ZERO, Polynomial, RationalMatrix, alpha, beta, delta, format_rational, gamma, kernel, q
from .tableaux import all_types, type_generating_function
from .transfer import bracket, norm, words_up_to_norm

PARAMS = ("alpha", "beta", "gamma", "delta", "q", "u")


class ReducibleChainError(ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    N: int
    r: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.r <= self.N:
            raise ValueError("need 0 <= r <= N")
        missing = [p for p in PARAMS if p not in self.params]
        if missing:
            raise ValueError(f"missing parameters: {', '.join(missing)}")
        object.__setattr__(self, "params", {p: Fraction(self.params[p]) for p in PARAMS})

    def __hash__(self):
        return hash((self.N, self.r, tuple(self.params[p] for p in PARAMS)))

    def check_unit_interval(self):
        bad = [p for p in PARAMS if not 0 <= self.params[p] <= 1]
        if bad:
            raise ValueError(f"parameters outside [0,1]: {', '.join(bad)}")


@dataclass(frozen=True)
class DistributionVector:
    states: tuple
    probs: tuple

    def as_dict(self) -> dict:
        return dict(zip(self.states, self.probs))

    def to_json(self) -> dict:
        return {"states": ["".join(map(str, s)) for s in self.states],
                "probs": [format_rational(p) if isinstance(p, Fraction) else p for p in self.probs]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["state", "probability", "approx"])
        for s, p in zip(self.states, self.probs):
            exact = format_rational(p) if isinstance(p, Fraction) else ""
            w.writerow(["".join(map(str, s)), exact, f"{float(p):.12g}"])
        return buf.getvalue()


def lam(n: int) -> Polynomial:
    """The Ansatz constant: αβ − γδ q^(n−1)."""
    if n < 1:
        raise ValueError("λ_n is defined for n >= 1")
    return alpha * beta - gamma * delta * q ** (n - 1)


# ---------------------------------------------------------------------------
# Transitions
# ---------------------------------------------------------------------------

def transitions(tau: tuple) -> list[tuple[tuple, str]]:
    """All moves out of ``tau`` as (target, rate name); rates are not yet divided by N+1."""
    n = len(tau)
    out = []
    if n == 0:
        return out
    if tau[0] == 0:
        out.append(((2,) + tau[1:], "alpha"))
    elif tau[0] == 2:
        out.append(((0,) + tau[1:], "gamma"))
    if tau[-1] == 2:
        out.append((tau[:-1] + (0,), "beta"))
    elif tau[-1] == 0:
        out.append((tau[:-1] + (2,), "delta"))
    for i in range(n - 1):
        a, b = tau[i], tau[i + 1]
        if a == b:
            continue
        tgt = tau[:i] + (b, a) + tau[i + 2:]
        # the larger letter moving right (21, 20, 10 -> 12, 02, 01) uses u; the reverse uses q
        out.append((tgt, "u" if a > b else "q"))
    return out


def build_chain(spec: ChainSpec, strict: bool = False) -> dict:
    """States in lexicographic order and the exact transition matrix."""
    if strict:
        spec.check_unit_interval()
    states = all_types(spec.N, spec.r)
    index = {s: n for n, s in enumerate(states)}
    P = RationalMatrix(len(states), len(states))
    scale = Fraction(1, spec.N + 1)
    for s in states:
        a = index[s]
        total = Fraction(0)
        for tgt, rate in transitions(s):
            p = spec.params[rate] * scale
            P[a, index[tgt]] += p
            total += p
        P[a, a] = 1 - total
    return {"states": states, "P": P}


def _digraph(states, P: RationalMatrix) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(states)))
    for a in range(len(states)):
        for b in range(len(states)):
            if a != b and P[a, b] != 0:
                g.add_edge(a, b)
    return g


def stationary_exact(spec: ChainSpec) -> DistributionVector:
    """The unique π with πP = π, by exact kernel of Pᵀ − I."""
    chain = build_chain(spec)
    states, P = chain["states"], chain["P"]
    g = _digraph(states, P)
    if not nx.is_strongly_connected(g):
        comps = list(nx.strongly_connected_components(g))
        raise ReducibleChainError(
            f"transition digraph has {len(comps)} strongly connected components; "
            f"the stationary law is not unique (check that alpha, beta > 0)")
    ker = kernel(P.transpose() - RationalMatrix.identity(len(states)))
    if len(ker) != 1:
        raise ReducibleChainError(f"kernel of P^T - I has dimension {len(ker)}, expected 1")
    v = ker[0]
    total = sum(v)
    probs = tuple(x / total for x in v)
    if any(p < 0 for p in probs):
        raise ArithmeticError("stationary vector has negative entries")
    return DistributionVector(tuple(states), probs)


def tableaux_stationary(N: int, r: int) -> dict:
    """Unnormalized stationary weight of each state: its tableaux generating function."""
    if not 0 <= r <= N:
        raise ValueError("need 0 <= r <= N")
    return {tau: type_generating_function(tau) for tau in all_types(N, r)}


def tableaux_distribution(spec: ChainSpec) -> DistributionVector:
    """The tableaux formula evaluated at the chain's parameters and normalized."""
    point = {**spec.params, "xi": Fraction(1)}
    weights = {tau: p.substitute(point) for tau, p in tableaux_stationary(spec.N, spec.r).items()}
    z = sum(weights.values())
    if z == 0:
        raise ZeroDivisionError("partition function vanishes at these parameters")
    states = tuple(weights)
    return DistributionVector(states, tuple(weights[s] / z for s in states))


# ---------------------------------------------------------------------------
# Symbolic balance
# ---------------------------------------------------------------------------

_RATE_POLY = {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta, "q": q, "u": ONE}


@lru_cache(maxsize=None)
def _f(tau: tuple) -> Polynomial:
    """Stationary weight at u = 1; the empty word has weight 1."""
    if not tau:
        return ONE
    return type_generating_function(tau).substitute({"u": 1})


def _flow(tau: tuple, moves_in, moves_out) -> Polynomial:
    inflow = sum((_RATE_POLY[rate] * _f(src) for src, rate in moves_in), ZERO)
    outflow = sum((_RATE_POLY[rate] for _, rate in moves_out), ZERO) * _f(tau)
    return inflow - outflow


def local_flows(tau: tuple) -> list[tuple[str, Polynomial, Polynomial]]:
    """Net flow into ``tau`` split by boundary/bond, with the predicted λ-multiple.

    Returns (where, flow, prediction) triples where prediction is ±λ_{N+r}
    times weights of words with one fewer letter.
    """
    n, r = len(tau), tau.count(1)
    L = lam(n + r)
    out = []
    # left boundary
    a = tau[0]
    if a == 1:
        out.append(("left", ZERO, ZERO))
    else:
        other = (2 - a,) + tau[1:]
        rate_in, rate_out = ("alpha", "gamma") if a == 2 else ("gamma", "alpha")
        flow = _flow(tau, [(other, rate_in)], [(other, rate_out)])
        sign = 1 if a == 2 else -1
        out.append(("left", flow, L * _f(tau[1:]) * sign))
    # bonds
    for i in range(n - 1):
        x, y = tau[i], tau[i + 1]
        where = f"bond {i + 1}"
        if x == y:
            out.append((where, ZERO, ZERO))
            continue
        other = tau[:i] + (y, x) + tau[i + 2:]
        # tau is reached from `other` by the reverse move
        rate_in = "q" if x > y else "u"
        rate_out = "u" if x > y else "q"
        flow = _flow(tau, [(other, rate_in)], [(other, rate_out)])
        sign = -1 if x > y else 1
        if {x, y} == {0, 2}:
            pred = _f(tau[:i] + tau[i + 1:]) + _f(tau[:i + 1] + tau[i + 2:])
        else:
            pred = _f(tau[:i] + (1,) + tau[i + 2:])
        out.append((where, flow, L * pred * sign))
    # right boundary
    b = tau[-1]
    if b == 1:
        out.append(("right", ZERO, ZERO))
    else:
        other = tau[:-1] + (2 - b,)
        rate_in, rate_out = ("delta", "beta") if b == 2 else ("beta", "delta")
        flow = _flow(tau, [(other, rate_in)], [(other, rate_out)])
        sign = -1 if b == 2 else 1
        out.append(("right", flow, L * _f(tau[:-1]) * sign))
    return out


def balance(tau: tuple) -> Polynomial:
    """Full net probability flow into ``tau`` under the tableaux weights (u = 1)."""
    moves_out = transitions(tau)
    moves_in = []
    for src in dict.fromkeys(src for src, _ in moves_out):
        for tgt, rate in transitions(src):
            if tgt == tau:
                moves_in.append((src, rate))
    return _flow(tau, moves_in, moves_out)


def verify_stationarity_symbolic(N: int, r: int) -> dict:
    """Check global balance of the tableaux weights, state by state, at u = 1."""
    states = all_types(N, r)
    failures = []
    for tau in states:
        total = balance(tau)
        flows = local_flows(tau)
        grouped = sum((f for _, f, _ in flows), ZERO)
        predicted = sum((p for _, _, p in flows), ZERO)
        bad_terms = [w for w, f, p in flows if f != p]
        if total != 0 or grouped != total or predicted != 0 or bad_terms:
            failures.append({"state": "".join(map(str, tau)), "balance": str(total),
                             "mismatched_terms": bad_terms})
    return {"N": N, "r": r, "states": len(states), "pass": not failures, "failures": failures}


# ---------------------------------------------------------------------------
# Matrix Ansatz relations
# ---------------------------------------------------------------------------

def _ansatz_cases(max_norm: int):
    """Yield (relation, words description, lhs, rhs) for relations I..V."""
    ws = words_up_to_norm(max(max_norm, 0))

    # (I) <X(DE - qED)Y> = λ_{||XY||+2} <X(D+E)Y>
    for x in ws:
        for y in ws:
            n = norm(x) + norm(y) + 2
            if n > max_norm:
                continue
            lhs = bracket(x + "DE" + y) - q * bracket(x + "ED" + y)
            rhs = lam(n) * (bracket(x + "D" + y) + bracket(x + "E" + y))
            yield "I", f"X={x or 'ε'},Y={y or 'ε'}", lhs, rhs
    # (II) β<XD> - δ<XE> = λ_{||X||+1} <X>
    # (III) α<E X> - γ<D X> = λ_{||X||+1} <X>
    for x in ws:
        n = norm(x) + 1
        if n > max_norm:
            continue
        yield "II", f"X={x or 'ε'}", beta * bracket(x + "D") - delta * bracket(x + "E"), lam(n) * bracket(x)
        yield "III", f"X={x or 'ε'}", alpha * bracket("E" + x) - gamma * bracket("D" + x), lam(n) * bracket(x)
    # (IV) <X(DA - qAD)Y'> = λ_{||XY'||+3} <XAY'>
    # (V)  <X(AE - qEA)Y'> = λ_{||XY'||+3} <XAY'>
    for x in ws:
        for y in ws:
            n = norm(x) + norm(y) + 3
            if n > max_norm:
                continue
            mid = bracket(x + "A" + y)
            yield "IV", f"X={x or 'ε'},Y'={y or 'ε'}", \
                bracket(x + "DA" + y) - q * bracket(x + "AD" + y), lam(n) * mid
            yield "V", f"X={x or 'ε'},Y'={y or 'ε'}", \
                bracket(x + "AE" + y) - q * bracket(x + "EA" + y), lam(n) * mid


def verify_ansatz(max_norm: int) -> dict:
    """Relations I..V for every A-compatible word whose λ index is at most ``max_norm``."""
    if max_norm < 2:
        raise ValueError("max_norm must be at least 2")
    counts = {k: 0 for k in ("I", "II", "III", "IV", "V")}
    bad = []
    for rel, where, lhs, rhs in _ansatz_cases(max_norm):
        counts[rel] += 1
        if lhs != rhs:
            bad.append({"relation": rel, "words": where, "lhs": str(lhs), "rhs": str(rhs)})
    return {"max_norm": max_norm, "checked": counts, "pass": not bad, "counterexamples": bad}


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def tv_distance(p, qv) -> float:
    return 0.5 * sum(abs(float(a) - float(b)) for a, b in zip(p, qv))


def mc_simulate(spec: ChainSpec, steps: int, seed: int, initial: int = 0,
                compare: bool = True) -> dict:
    """Run the discrete-time chain for ``steps`` steps and return occupation frequencies.

    The empirical law counts the states at times 0..steps, so steps = 0 puts all
    mass on the initial state.
    """
    spec.check_unit_interval()
    if steps < 0:
        raise ValueError("steps must be non-negative")
    chain = build_chain(spec)
    states, P = chain["states"], chain["P"]
    n = len(states)
    targets, cums = [], []
    for a in range(n):
        tg, acc, run = [], [], 0.0
        for b in range(n):
            p = P[a, b]
            if p:
                run += float(p)
                tg.append(b)
                acc.append(run)
        acc[-1] = 1.0
        targets.append(tg)
        cums.append(acc)
    rng = np.random.default_rng(seed)
    counts = [0] * n
    s = initial
    counts[s] += 1
    done = 0
    chunk = 1 << 20
    while done < steps:
        m = min(chunk, steps - done)
        for x in rng.random(m).tolist():
            s = targets[s][bisect.bisect_right(cums[s], x)]
            counts[s] += 1
        done += m
    total = steps + 1
    empirical = DistributionVector(tuple(states), tuple(c / total for c in counts))
    out = {"empirical": empirical, "final_state": states[s]}
    if compare:
        exact = stationary_exact(spec)
        out["tv_distance"] = tv_distance(empirical.probs, exact.probs)
    return out


# ---------------------------------------------------------------------------
# Seeded rational parameter tuples
# ---------------------------------------------------------------------------

def random_rational(rng: random.Random, max_den: int = 16, open_top: bool = False) -> Fraction:
    """A rational in (0, 1] (or (0, 1) with ``open_top``) with denominator at most max_den."""
    while True:
        d = rng.randint(1, max_den)
        x = Fraction(rng.randint(1, d), d)
        if not (open_top and x == 1):
            return x


def random_params(rng: random.Random, max_den: int = 16, q_below_one: bool = False) -> dict:
    p = {name: random_rational(rng, max_den) for name in ("alpha", "beta", "gamma", "delta")}
    p["q"] = random_rational(rng, max_den, open_top=q_below_one)
    p["u"] = Fraction(1)
    return p


def state_count(N: int, r: int) -> int:
    return comb(N, r) * 2 ** (N - r)
