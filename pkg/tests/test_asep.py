import random
from fractions import Fraction as Fr

import pytest

from rhombic.algebra import ZERO, alpha, beta, delta, gamma, q, u
from rhombic.asep import (
    ChainSpec, ReducibleChainError, balance, build_chain, lam, local_flows, mc_simulate,
    random_params, stationary_exact, state_count, tableaux_distribution, tableaux_stationary,
    transitions, tv_distance, verify_ansatz, verify_stationarity_symbolic,
)
from rhombic.tableaux import partition_function
from rhombic.transfer import bracket


def spec(N, r, **params):
    base = {"alpha": 1, "beta": 1, "gamma": 1, "delta": 1, "q": 1, "u": 1}
    return ChainSpec(N, r, {**base, **params})


# -- chain ---------------------------------------------------------------------

def test_states_21():
    assert build_chain(spec(2, 1))["states"] == [(0, 1), (1, 0), (1, 2), (2, 1)]


@pytest.mark.parametrize("N,r", [(n, r) for n in range(1, 5) for r in range(n + 1)])
def test_state_count_and_stochastic(N, r, half_third):
    chain = build_chain(ChainSpec(N, r, half_third))
    assert len(chain["states"]) == state_count(N, r)
    P = chain["P"]
    for a in range(P.rows):
        assert sum(P.row(a)) == 1
        assert all(x >= 0 for x in P.row(a))


def test_hop_directions():
    s = spec(2, 1, q=Fr(1, 5), u=Fr(1, 7))
    chain = build_chain(s)
    idx = {t: n for n, t in enumerate(chain["states"])}
    P = chain["P"]
    # 21 -> 12 moves the heavy particle right (rate u); 12 -> 21 is the left hop (rate q)
    assert P[idx[(2, 1)], idx[(1, 2)]] == Fr(1, 7) / 3
    assert P[idx[(1, 2)], idx[(2, 1)]] == Fr(1, 5) / 3


def test_boundary_moves():
    moves = dict(transitions((0, 1, 2)))
    assert moves[(2, 1, 2)] == "alpha" and moves[(0, 1, 0)] == "beta"
    moves = dict(transitions((2, 1, 0)))
    assert moves[(0, 1, 0)] == "gamma" and moves[(2, 1, 2)] == "delta"
    assert transitions((1, 1)) == []


def test_strict_mode_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_chain(spec(1, 0, alpha=2), strict=True)
    build_chain(spec(1, 0, alpha=2))


def test_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(2, 3, {})
    with pytest.raises(ValueError):
        ChainSpec(2, 1, {"alpha": 1})


# -- stationary ----------------------------------------------------------------

def test_two_state_chain(half_third):
    pi = stationary_exact(ChainSpec(1, 0, half_third)).as_dict()
    assert pi == {(0,): Fr(1, 2), (2,): Fr(1, 2)}


def test_two_state_chain_asymmetric():
    # π ∝ (β+γ, α+δ) by hand
    s = spec(1, 0, alpha=Fr(1, 3), beta=Fr(1, 2), gamma=Fr(1, 4), delta=Fr(1, 5))
    pi = stationary_exact(s).as_dict()
    a, b = Fr(1, 2) + Fr(1, 4), Fr(1, 3) + Fr(1, 5)
    assert pi == {(0,): a / (a + b), (2,): b / (a + b)}


def test_uniform_at_ones():
    pi = stationary_exact(spec(2, 1))
    assert set(pi.probs) == {Fr(1, 4)} and sum(pi.probs) == 1


def test_reducible_chain():
    with pytest.raises(ReducibleChainError):
        stationary_exact(spec(2, 0, alpha=0, delta=0))


def test_tableaux_stationary_examples():
    w = tableaux_stationary(2, 1)
    assert w[(2, 1)] == alpha * beta * u + alpha * delta * q + alpha * u * q + delta * q ** 2
    assert tableaux_stationary(1, 0)[(2,)] == alpha + delta
    for n, r in [(2, 1), (3, 1), (3, 0)]:
        assert sum(tableaux_stationary(n, r).values(), ZERO) == partition_function(n, r)


@pytest.mark.parametrize("N,r", [(n, r) for n in range(1, 5) for r in range(n + 1)])
def test_stationary_matches_tableaux_at_points(N, r):
    rng = random.Random(1000 * N + r)
    for _ in range(3):
        s = ChainSpec(N, r, random_params(rng))
        assert stationary_exact(s).as_dict() == tableaux_distribution(s).as_dict()


def test_r0_reduction_matches_single_species():
    # r = 0 states contain no 1's, so the chain is the single-species ASEP
    rng = random.Random(7)
    for N in range(1, 5):
        s = ChainSpec(N, 0, random_params(rng))
        assert all(1 not in t for t in build_chain(s)["states"])
        assert stationary_exact(s).as_dict() == tableaux_distribution(s).as_dict()


def test_distribution_csv(half_third):
    text = stationary_exact(ChainSpec(1, 0, half_third)).to_csv()
    assert text.splitlines() == ["state,probability,approx", "0,1/2,0.5", "2,1/2,0.5"]


def test_distribution_json(half_third):
    data = stationary_exact(ChainSpec(1, 0, half_third)).to_json()
    assert data == {"states": ["0", "2"], "probs": ["1/2", "1/2"]}


# -- symbolic balance ----------------------------------------------------------

def test_lambda():
    assert lam(1) == alpha * beta - gamma * delta
    assert lam(3) == alpha * beta - gamma * delta * q ** 2
    with pytest.raises(ValueError):
        lam(0)


def test_two_state_balance():
    assert balance((2,)) == ZERO and balance((0,)) == ZERO


@pytest.mark.parametrize("N,r", [(n, r) for n in range(1, 5) for r in range(n + 1)])
def test_symbolic_stationarity(N, r):
    rep = verify_stationarity_symbolic(N, r)
    assert rep["pass"], rep["failures"]
    assert rep["states"] == state_count(N, r)


def test_worked_state_flows():
    flows = local_flows((0, 2, 1, 0, 2))
    assert all(f == p for _, f, p in flows)
    assert sum((f for _, f, _ in flows), ZERO) == ZERO
    assert balance((0, 2, 1, 0, 2)) == ZERO


# -- ansatz --------------------------------------------------------------------

def test_ansatz_small():
    rep = verify_ansatz(4)
    assert rep["pass"] and rep["counterexamples"] == []
    assert all(v > 0 for v in rep["checked"].values())


def test_ansatz_examples_by_hand():
    # (III) with X = ε: α(β+γ) − γ(α+δ) = λ_1
    assert alpha * bracket("E") - gamma * bracket("D") == lam(1)
    # (II) with X = A
    assert beta * bracket("AD") - delta * bracket("AE") == lam(3)


def test_ansatz_bound():
    with pytest.raises(ValueError):
        verify_ansatz(1)


# -- Monte Carlo ---------------------------------------------------------------

def test_zero_steps(half_third):
    out = mc_simulate(ChainSpec(2, 1, half_third), 0, seed=1, initial=2)
    probs = out["empirical"].probs
    assert probs[2] == 1.0 and sum(probs) == 1.0


def test_determinism(half_third):
    s = ChainSpec(3, 1, half_third)
    a = mc_simulate(s, 5000, seed=9)
    b = mc_simulate(s, 5000, seed=9)
    c = mc_simulate(s, 5000, seed=10)
    assert a == b and a["empirical"] != c["empirical"]


def test_mc_rejects_bad_input(half_third):
    with pytest.raises(ValueError):
        mc_simulate(ChainSpec(2, 1, half_third), -1, seed=0)
    with pytest.raises(ValueError):
        mc_simulate(spec(2, 1, q=2), 10, seed=0)


def test_mc_converges_21(half_third):
    out = mc_simulate(ChainSpec(2, 1, half_third), 2_000_000, seed=42)
    assert out["tv_distance"] < 0.02


def test_tv_distance():
    assert tv_distance([1, 0], [0, 1]) == 1.0
    assert tv_distance([Fr(1, 2), Fr(1, 2)], [0.5, 0.5]) == 0.0
