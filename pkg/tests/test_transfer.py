import itertools

import pytest

from rhombic.algebra import ONE, ZERO, alpha, beta, delta, gamma, q, xi
from rhombic.tableaux import all_types, partition_function, type_generating_function
from rhombic.transfer import (
    A, D, E, F, G, IDENTITIES, _Checker, EntryKey, WordSpec, a_closed_form, bracket, entry,
    f_recurrence, fugacity_bracket_sum, g_recurrence, q_int, type_to_word,
    verify_identity, w_row, word_to_type, words_up_to_norm,
)

SMALL = {"max_index": 3, "max_t": 1, "max_word": 2, "max_norm": 4}


# -- entries -------------------------------------------------------------------

def test_d_base_alpha():
    assert entry(EntryKey("D", 0, 0, 0, 1)) == alpha


def test_e_base_with_superscript():
    assert entry(EntryKey("E", 0, 0, 0, 0, t=1)) == beta * (q + alpha + gamma * q)


def test_a_entry_example():
    assert entry(EntryKey("A", 0, 1, 2, 0)) == 2 * beta * delta * q


def test_f_entry_unrolled_by_hand():
    # F_{0,1,1,0} = δ E_{0,0,0,0} + F_{0,1,0,-1} = δβ
    assert entry(EntryKey("F", 0, 1, 1, 0)) == beta * delta
    assert entry(EntryKey("G", 0, 1, 1, 0)) == beta * delta


def test_unknown_matrix():
    with pytest.raises(ValueError):
        entry(EntryKey("Z", 0, 0, 0, 0))


def test_q_integer():
    assert q_int(0) == ZERO and q_int(3) == 1 + q + q ** 2


def test_negative_indices_are_zero():
    for fn in (D, E, F, G):
        assert fn(0, -1, 0, 0, 0) == ZERO and fn(0, 0, 0, 0, -1) == ZERO
    assert A(0, 0, -1, 0) == ZERO


def test_zero_structure():
    r = range(5)
    for t in range(3):
        for i, j, k, l in itertools.product(r, repeat=4):
            if j < i or l > k + 1:
                assert D(t, i, j, k, l) == ZERO and E(t, i, j, k, l) == ZERO
            if j <= i or l >= k:
                assert F(t, i, j, k, l) == ZERO and G(t, i, j, k, l) == ZERO
    for i, j, k, l in itertools.product(range(6), repeat=4):
        if l > k or j - i > k - l:
            assert A(i, j, k, l) == ZERO


def test_a_closed_form():
    for i, j, k, l in itertools.product(range(7), repeat=4):
        assert A(i, j, k, l) == a_closed_form(i, j, k, l)


def test_f_recurrence_consistent_on_diagonal():
    # on k = l >= 1 the raw recurrence (with its indicator terms) already gives 0;
    # at k = l = 0 only the zero region applies
    for t in range(3):
        for i, j, k in itertools.product(range(5), range(5), range(1, 5)):
            if j > i:
                assert f_recurrence(t, i, j, k, k) == ZERO
                assert g_recurrence(t, i, j, k, k) == ZERO
    assert F(0, 0, 1, 0, 0) == ZERO and G(0, 0, 0, 0, 0) == ZERO


# -- words ---------------------------------------------------------------------

def test_word_superscripts():
    w = WordSpec("DAEAD")
    assert w.tokens == (("D", 0), ("A", None), ("E", 1), ("A", None), ("D", 2))
    assert (w.n_a, w.n_d, w.norm) == (2, 2, 7)
    assert w.tau() == (2, 1, 0, 1, 2)


def test_word_offset():
    assert WordSpec("EAD", offset=2).tokens == (("E", 2), ("A", None), ("D", 3))


def test_word_parse_validates():
    assert WordSpec.parse("D(0)AE(1)").letters == "DAE"
    with pytest.raises(ValueError):
        WordSpec.parse("D(0)AE(0)")
    with pytest.raises(ValueError):
        WordSpec("DX")


def test_type_word_round_trip():
    for tau in all_types(4, 2):
        assert word_to_type(type_to_word(tau)) == tau


def test_words_up_to_norm():
    ws = words_up_to_norm(2)
    assert set(ws) == {"", "A", "D", "E", "DD", "DE", "ED", "EE"}


# -- brackets ------------------------------------------------------------------

def test_w_row_empty():
    assert w_row("") == {(0, 0): ONE}


def test_w_row_d():
    assert w_row("D") == {(0, 1): alpha, (1, 0): delta}


def test_w_row_a():
    assert w_row("A") == {(0, 0): ONE}


def test_w_row_rejects_offset():
    with pytest.raises(ValueError):
        w_row(WordSpec("D", offset=1))


def test_bracket_d():
    assert bracket("D") == alpha + delta


def test_bracket_a_power():
    for r in range(5):
        assert bracket("A" * r) == ONE


def test_bracket_da():
    assert bracket("DA") == alpha * beta + alpha * delta * q + alpha * q + delta * q ** 2


def test_bracket_accepts_type_tuples():
    assert bracket((2, 1)) == bracket("DA") == bracket(WordSpec.parse("D(0)A"))


@pytest.mark.parametrize("tau", [t for n in range(1, 5) for r in range(n + 1) for t in all_types(n, r)])
def test_bracket_matches_tableaux(tau):
    assert bracket(tau) == type_generating_function(tau).substitute({"u": 1})


def test_fugacity_examples():
    assert fugacity_bracket_sum(1, 0) == xi * (alpha + delta) + beta + gamma
    assert fugacity_bracket_sum(1, 1) == ONE
    assert fugacity_bracket_sum(2, 1).evaluate() == 16


def test_fugacity_matches_partition_function():
    for n in range(1, 5):
        for r in range(n + 1):
            assert fugacity_bracket_sum(n, r) == partition_function(n, r, True).substitute({"u": 1})


# -- identity registry ---------------------------------------------------------

def test_ij_reduction_example():
    assert D(0, 1, 1, 0, 1) == q * D(0, 0, 0, 0, 1) == alpha * q


def test_f_equals_g_example_range():
    rep = verify_identity("f_equals_g", {"max_index": 4, "max_t": 2})
    assert rep.passed and rep.counterexamples == []
    assert rep.checked == 3 * 5 ** 4


@pytest.mark.parametrize("name", sorted(IDENTITIES))
def test_identity_small_range(name):
    rep = verify_identity(name, SMALL)
    assert rep.passed, rep.counterexamples
    assert rep.checked > 0
    assert rep.to_json()["pass"] is True


def test_unknown_identity():
    with pytest.raises(ValueError):
        verify_identity("commutator_XY")


def test_checker_reports_counterexample():
    # sanity check of the harness: a deliberately wrong identity is caught
    c = _Checker("bogus")
    c.vec({(0, 1): alpha}, {(0, 1): beta}, word="D")
    c.scalar(ONE, ONE)
    rep = c.report()
    assert not rep.passed and rep.checked == 2
    assert rep.counterexamples[0]["word"] == "D"


def test_commutator_ef_t0():
    rep = verify_identity("commutator_EF", {"max_index": 4, "max_t": 0})
    assert rep.passed


def test_gamma_delta_used():
    # E_{0,0,0,1} = γ: the γ entry path is exercised
    assert E(0, 0, 0, 0, 1) == gamma and E(1, 0, 0, 0, 1) == gamma * q ** 2
    assert A(0, 0, 0, 0) == ONE and D(0, 0, 1, 0, 0) == delta
