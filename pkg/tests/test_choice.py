"""Choice-function variants: evaluation semantics and payload validation."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contractmatch.choice import (
    Identity,
    PerturbationScheme,
    ResponsiveQuota,
    TableChoice,
    TopOfOrder,
    UnionOfOrders,
    ValuationArgmax,
    convolve_valuations,
    tabulate,
    union_of_orders_choice,
    valuation_choice,
)
from contractmatch.errors import DomainError, SpecError
from contractmatch.sets import full_mask, iter_submasks

from conftest import all_masks


# ---------------------------------------------------------------------------
# Identity / TableChoice
# ---------------------------------------------------------------------------


def test_identity():
    f = Identity(3)
    for m in all_masks(3):
        assert f.choose_mask(m) == m


def test_identity_rejects_out_of_universe():
    with pytest.raises(DomainError):
        Identity(2).choose_mask(0b100)


def test_table_lookup():
    f = TableChoice(2, (0b00, 0b01, 0b00, 0b11))
    assert f.choose_mask(0b00) == 0b00
    assert f.choose_mask(0b01) == 0b01
    assert f.choose_mask(0b10) == 0b00
    assert f.choose_mask(0b11) == 0b11


def test_table_must_cover_every_subset():
    with pytest.raises(SpecError, match="every subset exactly once"):
        TableChoice(2, (0, 1, 2))


def test_table_entries_must_stay_in_universe():
    with pytest.raises(SpecError, match="outside the universe"):
        TableChoice(1, (0b10, 0b01))


def test_table_may_violate_contraction():
    # Tables are raw material for checker tests; f({b}) = {} and even
    # f(A) not within A must be representable.
    TableChoice(1, (0b1, 0b0))


# ---------------------------------------------------------------------------
# Rankings
# ---------------------------------------------------------------------------


def test_top_of_order():
    f = TopOfOrder(3, (2, 0, 1))
    assert f.choose_mask(0b111) == 0b100
    assert f.choose_mask(0b011) == 0b001
    assert f.choose_mask(0b010) == 0b010
    assert f.choose_mask(0) == 0


def test_top_of_order_restricted_domain():
    f = TopOfOrder(3, (2, 0))
    assert f.domain_mask == 0b101
    assert f.choose_mask(0b101) == 0b100
    with pytest.raises(DomainError):
        f.choose_mask(0b010)


def test_ranking_validation():
    with pytest.raises(SpecError, match="repeats"):
        TopOfOrder(3, (0, 0))
    with pytest.raises(SpecError, match="outside the universe"):
        TopOfOrder(2, (0, 5))


def test_responsive_quota():
    f = ResponsiveQuota(4, (3, 1, 0, 2), 2)
    assert f.choose_mask(0b1111) == 0b1010
    assert f.choose_mask(0b0101) == 0b0101
    assert f.choose_mask(0b0100) == 0b0100
    assert ResponsiveQuota(3, (0, 1, 2), 0).choose_mask(0b111) == 0
    assert ResponsiveQuota(3, (0, 1, 2), 7).choose_mask(0b111) == 0b111


def test_responsive_quota_negative():
    with pytest.raises(SpecError, match="quota"):
        ResponsiveQuota(2, (0, 1), -1)


def test_union_of_orders():
    f = UnionOfOrders(3, ((0, 1, 2), (2, 1, 0)))
    assert f.choose_mask(0b111) == 0b101
    assert f.choose_mask(0b011) == 0b011
    assert f.choose_mask(0b001) == 0b001


def test_union_of_orders_requires_total_orders():
    with pytest.raises(SpecError, match="at least one order"):
        UnionOfOrders(2, ())
    with pytest.raises(SpecError, match="exactly once"):
        UnionOfOrders(3, ((0, 1),))


def test_union_of_orders_helper():
    f = union_of_orders_choice([[1, 0]], 2)
    assert isinstance(f, UnionOfOrders)
    assert f.choose_mask(0b11) == 0b10


@given(st.integers(min_value=1, max_value=6), st.randoms(use_true_random=False))
def test_union_of_orders_chooses_available_tops(n, rnd):
    orders = []
    for _ in range(rnd.randint(1, 3)):
        order = list(range(n))
        rnd.shuffle(order)
        orders.append(tuple(order))
    f = UnionOfOrders(n, tuple(orders))
    for menu in all_masks(n):
        expected = 0
        for order in orders:
            for c in order:
                if menu >> c & 1:
                    expected |= 1 << c
                    break
        assert f.choose_mask(menu) == expected


# ---------------------------------------------------------------------------
# Valuation-driven choice
# ---------------------------------------------------------------------------


def test_value_tie_breaks_toward_lower_id():
    # v({0}) == v({1}) == v({0,1}): the perturbation must single out {0}.
    f = valuation_choice([0, 1, 1, 1])
    assert f.choose_mask(0b11) == 0b01
    assert f.choose_mask(0b10) == 0b10
    assert f.choose_mask(0b01) == 0b01


def test_unit_demand_valuation_picks_best_item():
    # Items worth 3 and 5; keep only the best offered one.
    f = valuation_choice([0, 3, 5, 5])
    assert f.choose_mask(0b11) == 0b10
    assert f.choose_mask(0b01) == 0b01


def test_additive_positive_valuation_keeps_everything():
    values = [0, 2, 3, 5, 4, 6, 7, 9]
    f = valuation_choice(values)
    for menu in all_masks(3):
        assert f.choose_mask(menu) == menu


def test_valuation_constant_shift_invariance():
    base = [0, 1, 1, 1, 2, 3, 2, 3]
    shifted = [v + 7 for v in base]
    f, g = valuation_choice(base), valuation_choice(shifted)
    for menu in all_masks(3):
        assert f.choose_mask(menu) == g.choose_mask(menu)


def test_chosen_set_attains_unperturbed_max():
    values = [Fraction(v) for v in [0, 4, 4, 4, 1, 5, 4, 6]]
    f = valuation_choice(values)
    for menu in all_masks(3):
        chosen = f.choose_mask(menu)
        assert chosen & ~menu == 0
        assert values[chosen] == max(values[sub] for sub in iter_submasks(menu))


def test_epsilon_too_large_rejected():
    # gap = 1, n = 2: epsilon must be < 1/2.
    scheme = PerturbationScheme.dyadic(2, Fraction(1, 2))
    with pytest.raises(SpecError, match="epsilon .* too large"):
        ValuationArgmax(2, tuple(Fraction(v) for v in [0, 1, 1, 1]), scheme)


def test_scheme_prices_must_stay_in_range():
    with pytest.raises(SpecError, match=r"\[0, epsilon\]"):
        ValuationArgmax(
            1,
            (Fraction(0), Fraction(1)),
            PerturbationScheme(Fraction(1, 8), (Fraction(1, 4),)),
        )
    with pytest.raises(SpecError, match="positive"):
        ValuationArgmax(
            1,
            (Fraction(0), Fraction(1)),
            PerturbationScheme(Fraction(0), (Fraction(0),)),
        )


def test_scheme_that_cannot_break_ties_rejected():
    # Zero prices leave v({0}) == v({1}) tied on the menu {0, 1}.
    scheme = PerturbationScheme(Fraction(1, 8), (Fraction(0), Fraction(0)))
    with pytest.raises(SpecError, match="fails to break ties"):
        ValuationArgmax(2, tuple(Fraction(v) for v in [0, 1, 1, 1]), scheme)


def test_dyadic_prices_increase_with_id():
    scheme = PerturbationScheme.dyadic(4, Fraction(1, 4))
    assert scheme.prices == (
        Fraction(1, 8),
        Fraction(3, 16),
        Fraction(7, 32),
        Fraction(15, 64),
    )
    assert all(0 < p < scheme.epsilon for p in scheme.prices)
    assert list(scheme.prices) == sorted(scheme.prices)


def test_for_valuation_derives_safe_epsilon():
    values = tuple(Fraction(v) for v in [0, 2, 6, 8])
    scheme = PerturbationScheme.for_valuation(values)
    assert scheme.epsilon == Fraction(2, 4)  # gap 2, n 2 -> gap / (2 n)
    ValuationArgmax(2, values, scheme)  # constructible


def test_valuation_table_length_must_be_power_of_two():
    with pytest.raises(SpecError, match="power of two"):
        valuation_choice([0, 1, 2])


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def test_tabulate_roundtrip():
    f = UnionOfOrders(3, ((1, 0, 2),))
    t = tabulate(f)
    for m in all_masks(3):
        assert t.choose_mask(m) == f.choose_mask(m)


def test_tabulate_requires_full_domain():
    with pytest.raises(DomainError, match="full universe"):
        tabulate(TopOfOrder(3, (0, 1)))


def test_convolve_valuations_small():
    # first: additive {0: 1, 1: 4}; second: additive {0: 3, 1: 2}.
    first = [0, 1, 4, 5]
    second = [0, 3, 2, 5]
    out = convolve_valuations(first, second)
    # Best split of {0}: give 0 to the second agent (3 > 1).
    assert out[0b01] == 3
    # Best split of {1}: give 1 to the first agent (4 > 2).
    assert out[0b10] == 4
    assert out[0b11] == 7
    assert out[0] == 0


def test_convolve_requires_common_universe():
    with pytest.raises(SpecError, match="share one universe"):
        convolve_valuations([0, 1], [0, 1, 2, 3])


def test_full_domain_default():
    for f in (Identity(3), TableChoice(1, (0, 1)), UnionOfOrders(2, ((0, 1),))):
        assert f.domain_mask == full_mask(f.n)


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10_000))
def test_valuation_choice_is_contraction_and_unique(n, seed):
    import random

    rnd = random.Random(seed)
    values = [Fraction(rnd.randint(0, 4)) for _ in all_masks(n)]
    values[0] = Fraction(0)
    f = valuation_choice(values)
    for menu in all_masks(n):
        chosen = f.choose_mask(menu)
        assert chosen & ~menu == 0
        # maximizer of the unperturbed value as well
        assert values[chosen] == max(values[sub] for sub in iter_submasks(menu))
