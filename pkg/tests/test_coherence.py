"""Axiom checkers: exact witnesses, axiom isolation, equivalences, bounds."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contractmatch.choice import Identity, TableChoice, TopOfOrder, valuation_choice
from contractmatch.coherence import (
    AXIOM_PATH,
    AXIOM_SUBSTITUTES,
    check_coherent,
    check_contraction,
    check_irc,
    check_path_independence,
    check_substitutes,
)
from contractmatch.corpus import no_stable_agreement_instance
from contractmatch.errors import SizeBoundError, SpecError
from contractmatch.sets import bit, iter_submasks

from conftest import all_masks, random_contraction_table, random_coherent_function


# ---------------------------------------------------------------------------
# The canonical two-contract instance: f1 fails substitutes at (b, {b}, {a,b})
# ---------------------------------------------------------------------------


def test_canonical_f1_substitutes_witness():
    f1 = no_stable_agreement_instance().f1
    violations = check_substitutes(f1)
    assert len(violations) == 1
    (v,) = violations
    assert v.axiom == AXIOM_SUBSTITUTES
    assert v.contract == 1  # contract 'b'
    assert v.set_b == 0b10  # the smaller menu {b}
    assert v.set_a == 0b11  # the larger menu {a, b}
    assert v.replay(f1)
    assert "b" in v.describe(("a", "b"))


def test_canonical_f1_other_axioms():
    f1 = no_stable_agreement_instance().f1
    assert check_contraction(f1) == []
    assert check_irc(f1) == []
    report = check_coherent(f1)
    assert not report.coherent
    assert report.cross_check_ok
    assert len(report.path_independence) > 0


def test_canonical_f2_coherent():
    f2 = no_stable_agreement_instance().f2
    report = check_coherent(f2)
    assert report.coherent
    assert report.cross_check_ok
    assert report.all_violations() == ()


def test_witness_does_not_replay_on_other_function():
    inst = no_stable_agreement_instance()
    (v,) = check_substitutes(inst.f1)
    assert not v.replay(inst.f2)


# ---------------------------------------------------------------------------
# Axiom isolation on hand-built tables
# ---------------------------------------------------------------------------


def test_contraction_violation_detected():
    f = TableChoice(1, (0b1, 0b1))  # chooses a from the empty menu
    violations = check_contraction(f)
    assert [v.set_a for v in violations] == [0]
    assert violations[0].replay(f)
    report = check_coherent(f)
    assert not report.coherent and report.cross_check_ok


def test_irc_only_violation():
    # f({a,b}) = {}, f({a}) = {a}: dropping rejected b resurrects a.
    f = TableChoice(2, (0b00, 0b01, 0b00, 0b00))
    assert check_contraction(f) == []
    irc = check_irc(f)
    assert any(v.set_a == 0b11 and v.set_b == 0b01 and v.contract == 1 for v in irc)
    for v in irc:
        assert v.replay(f)
    assert check_substitutes(f) == []  # nothing chosen from {a,b}: vacuous
    report = check_coherent(f)
    assert not report.coherent and report.cross_check_ok


def test_path_independence_flags_incoherent_table():
    f = no_stable_agreement_instance().f1
    path = check_path_independence(f)
    assert path
    for v in path:
        assert v.axiom == AXIOM_PATH
        assert v.replay(f)


def test_coherent_variants_pass_all_checks():
    cases = [
        Identity(4),
        TopOfOrder(4, (2, 0, 3, 1)),
        valuation_choice([0, 1, 1, 1]),
        random_coherent_function(5, 5),
    ]
    for f in cases:
        report = check_coherent(f)
        assert report.coherent, report.describe()
        assert report.cross_check_ok


def test_restricted_domain_checked_over_domain():
    f = TopOfOrder(5, (4, 1))  # domain {1, 4} only
    report = check_coherent(f)
    assert report.coherent
    # Witnesses from restricted-domain functions use global contract ids.
    g = TopOfOrder(5, (4, 1))
    violations = check_substitutes(g)
    assert violations == []


class _LeakyDomain(TopOfOrder):
    """Chooses a contract outside its declared domain (a contract bug)."""

    def _choose(self, subset: int) -> int:
        return bit(3)


def test_choice_leaving_domain_is_reported():
    f = _LeakyDomain(5, (4, 1))
    with pytest.raises(SpecError, match="leaves its own declared domain"):
        check_coherent(f)


# ---------------------------------------------------------------------------
# Equivalent formulations (exhaustive on random tables)
# ---------------------------------------------------------------------------


def _irc_direct(table: list[int], n: int) -> bool:
    for m in all_masks(n):
        rejected = m & ~table[m]
        for x in range(n):
            if rejected >> x & 1 and table[m ^ bit(x)] & ~table[m]:
                return False
    return True


def _local_monotonicity(table: list[int], n: int) -> bool:
    # f(A) <= B <= A implies f(B) <= f(A)
    for m in all_masks(n):
        chosen = table[m]
        if chosen & ~m:
            continue
        between = m & ~chosen
        for extra in iter_submasks(between):
            b = chosen | extra
            if table[b] & ~chosen:
                return False
    return True


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=10**6))
def test_irc_equals_local_monotonicity_under_contraction(n, seed):
    rng = random.Random(seed)
    table = list(random_contraction_table(rng, n))
    f = TableChoice(n, tuple(table))
    checker_says = check_irc(f) == []
    assert checker_says == _irc_direct(table, n)
    assert checker_says == _local_monotonicity(table, n)


def _substitutes_membership(table: list[int], n: int) -> bool:
    # x in f({x} | A) and B <= A imply x in f({x} | B)
    for a in all_masks(n):
        for b in iter_submasks(a):
            for x in range(n):
                xb = bit(x)
                if table[a | xb] & xb and not table[b | xb] & xb:
                    return False
    return True


def _substitutes_intersection(table: list[int], n: int) -> bool:
    # B & f(A) <= f(B) whenever B <= A
    for a in all_masks(n):
        for b in iter_submasks(a):
            if b & table[a] & ~table[b]:
                return False
    return True


def _substitutes_rejection(table: list[int], n: int) -> bool:
    # x in B <= A and x not in f(B) imply x not in f(A)
    for a in all_masks(n):
        for b in iter_submasks(a):
            if b & ~table[b] & table[a]:
                return False
    return True


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=10**6))
def test_substitutes_formulations_agree(n, seed):
    rng = random.Random(seed)
    table = list(random_contraction_table(rng, n))
    f = TableChoice(n, tuple(table))
    checker_says = check_substitutes(f) == []
    assert checker_says == _substitutes_intersection(table, n)
    assert checker_says == _substitutes_rejection(table, n)
    # The singleton-persistence form is equivalent given contraction + IRC.
    if check_irc(f) == []:
        assert checker_says == _substitutes_membership(table, n)


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=10**6))
def test_coherence_equals_contraction_plus_path_independence(n, seed):
    rng = random.Random(seed)
    f = TableChoice(n, random_contraction_table(rng, n))
    report = check_coherent(f)
    assert report.cross_check_ok
    via_path = not report.contraction and not report.path_independence
    assert via_path == report.coherent


def test_second_coherence_route_product_form():
    # With contraction, coherence also equals f(A|B) == f(f(A)|f(B)).
    for seed in range(40):
        rng = random.Random(seed)
        n = 3
        table = random_contraction_table(rng, n)
        f = TableChoice(n, table)
        product_form = all(
            table[a | b] == table[table[a] | table[b]]
            for a in all_masks(n)
            for b in all_masks(n)
        )
        assert product_form == check_coherent(f).coherent


# ---------------------------------------------------------------------------
# Size bounds
# ---------------------------------------------------------------------------


def test_exhaustive_bound_refusal():
    with pytest.raises(SizeBoundError, match="bound is 12"):
        check_contraction(Identity(13))


def test_pairwise_bound_refusal():
    with pytest.raises(SizeBoundError, match="bound is 10"):
        check_substitutes(Identity(11))
    with pytest.raises(SizeBoundError, match="bound is 10"):
        check_path_independence(Identity(11))
    # ... while the cheaper exhaustive scans still run at that size.
    assert check_contraction(Identity(11)) == []


def test_bound_override_via_argument():
    assert check_contraction(Identity(13), max_n=13) == []
    with pytest.raises(SizeBoundError):
        check_contraction(Identity(5), max_n=4)


def test_bound_override_via_environment(monkeypatch):
    monkeypatch.setenv("CONTRACTMATCH_EXHAUSTIVE_BOUND", "13")
    assert check_contraction(Identity(13)) == []
    monkeypatch.setenv("CONTRACTMATCH_EXHAUSTIVE_BOUND", "bogus")
    assert check_contraction(Identity(12)) == []  # falls back to the default
