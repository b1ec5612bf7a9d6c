"""Canonical small instances used by tests, docs, and the shipped fixtures.

The JSON files under ``contractmatch/fixtures/`` are generated from these
builders by ``scripts/make_fixtures.py``, so the in-memory and on-disk
corpora cannot drift apart.
"""

from __future__ import annotations

from pathlib import Path

from .aggregation import build_marriage_instance
from .choice import Identity, TableChoice
from .engine import ContractLabel, Instance
from .market import MarketContract, MoneyEconomy
from .preference import COHERENCE_ASSERTED

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture file, e.g. ``fixture_path("identity")``."""
    return FIXTURE_DIR / f"{name}.json"


def no_stable_agreement_instance() -> Instance:
    """The classic two-contract instance without any stable agreement.

    Side 1 wants ``a`` alone or both together but nothing of ``b`` by
    itself (a complementarity, violating Substitutes); side 2 takes either
    alone but prefers ``b`` from the pair.  Every candidate fails: the
    empty set is blocked by ``a``, ``{a}`` is blocked by ``b``, ``{b}`` is
    not kept by side 1, and the pair is not kept by side 2.  The engine
    still terminates here, ending at the empty set, which its own verdict
    then flags as unstable.
    """
    f1 = TableChoice(2, (0b00, 0b01, 0b00, 0b11))
    f2 = TableChoice(2, (0b00, 0b01, 0b10, 0b10))
    return Instance(names=("a", "b"), f1=f1, f2=f2)


def identity_instance(n: int = 3) -> Instance:
    """Both sides keep everything; the unique stable agreement is the universe."""
    names = tuple("abcdefghijklmnop"[i] for i in range(n))
    return Instance(
        names=names, f1=Identity(n), f2=Identity(n), coherence=COHERENCE_ASSERTED
    )


def marriage_1x1() -> Instance:
    return build_marriage_instance([[0]], [[0]])


def marriage_2x2() -> Instance:
    """Mutually-first preferences: m1/w1 and m2/w2 are each other's top."""
    return build_marriage_instance([[0, 1], [1, 0]], [[0, 1], [1, 0]])


def marriage_3x3() -> Instance:
    """The cyclic profile with three stable matchings (a three-element chain)."""
    men = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    women = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    return build_marriage_instance(men, women)


def price_gap_economy() -> MoneyEconomy:
    """A deliberately non-conforming economy whose stable agreement violates
    the two-price law.

    Both sides keep everything, so the full set ``{x, y}`` is the unique
    stable agreement; it trades the same template at grid prices 10 and 12
    while 11 sits unused between them.  No-shortage fails (most tuples are
    missing), which is exactly why the two-price law can fail here: the
    advisory mode of the market checks exists for such inputs.
    """
    instance = Instance(
        names=("x", "y"),
        f1=Identity(2),
        f2=Identity(2),
        labels=(ContractLabel("p1", "c1"), ContractLabel("p1", "c2")),
        coherence=COHERENCE_ASSERTED,
    )
    return MoneyEconomy(
        instance=instance,
        contracts=(
            MarketContract("p1", "c1", "widget", 0),
            MarketContract("p1", "c2", "widget", 2),
        ),
        price_grid=(10, 11, 12),
        templates=("widget",),
    )
