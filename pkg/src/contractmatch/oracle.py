"""Ground-truth brute force, kept independent of the engine's iteration.

Everything here recomputes results straight from definitions: stable
agreements by scanning all ``2**n`` subsets, lattice bounds by scanning the
catalog, one-to-one matchings by the textbook proposal algorithm.  The only
thing shared with the engine is the bitmask subset representation and the
instance's choice evaluators, so an engine bug cannot leak into the oracle's
answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import limits
from .choice import TableChoice
from .engine import Instance
from .errors import PreconditionError, SizeBoundError
from .preference import COHERENCE_UNKNOWN, prefers
from .sets import full_mask


@dataclass(frozen=True)
class StableSetCatalog:
    """Every stable agreement of an instance, with side 1's revealed order.

    ``sets`` lists the stable agreements ascending by bitmask;
    ``below[i][j]`` is True when ``sets[i]`` is revealed weakly below
    ``sets[j]`` for side 1.  On coherent instances side 2's order is the
    exact inverse, so one matrix describes both.
    """

    n: int
    sets: tuple[int, ...]
    below: tuple[tuple[bool, ...], ...]

    def __len__(self) -> int:
        return len(self.sets)

    def index(self, subset: int) -> int:
        try:
            return self.sets.index(subset)
        except ValueError:
            raise PreconditionError(
                f"subset {subset:#x} is not in the stable-agreement catalog"
            ) from None


def enumerate_stable_agreements(
    instance: Instance, max_n: int | None = None
) -> StableSetCatalog:
    """Exhaustively catalog the stable agreements of an instance.

    A subset qualifies when both sides keep it exactly and no single
    outside contract would be accepted by both sides on top of it; this is
    checked directly from the definitions on a full tabulation of both side
    functions.
    """
    n = instance.n
    limit = limits.oracle_bound() if max_n is None else max_n
    if n > limit:
        raise SizeBoundError(
            f"stable-agreement enumeration refused: {n} contracts, bound is {limit}"
        )
    size = 1 << n
    universe = full_mask(n)
    t1 = [instance.f1.choose_mask(m) for m in range(size)]
    t2 = [instance.f2.choose_mask(m) for m in range(size)]

    found = []
    for subset in range(size):
        if t1[subset] != subset or t2[subset] != subset:
            continue
        outside = universe ^ subset
        blocked = False
        while outside:
            xbit = outside & -outside
            menu = subset | xbit
            if t1[menu] & xbit and t2[menu] & xbit:
                blocked = True
                break
            outside ^= xbit
        if not blocked:
            found.append(subset)

    side1 = TableChoice(n, tuple(t1))
    below = tuple(
        tuple(
            prefers(side1, bigger, smaller, COHERENCE_UNKNOWN).holds
            for bigger in found
        )
        for smaller in found
    )
    return StableSetCatalog(n, tuple(found), below)


def brute_glb(catalog: StableSetCatalog, first: int, second: int) -> int | None:
    """Greatest lower bound of two catalog members in side 1's order.

    Scans the catalog for the unique common lower bound dominating all
    others.  Returns None when no unique greatest lower bound exists (which
    signals a theorem violation on coherent instances).
    """
    i, j = catalog.index(first), catalog.index(second)
    lows = [
        k
        for k in range(len(catalog))
        if catalog.below[k][i] and catalog.below[k][j]
    ]
    greatest = [k for k in lows if all(catalog.below[other][k] for other in lows)]
    if len(greatest) != 1:
        return None
    return catalog.sets[greatest[0]]


def brute_lub(catalog: StableSetCatalog, first: int, second: int) -> int | None:
    """Least upper bound of two catalog members in side 1's order."""
    i, j = catalog.index(first), catalog.index(second)
    highs = [
        k
        for k in range(len(catalog))
        if catalog.below[i][k] and catalog.below[j][k]
    ]
    least = [k for k in highs if all(catalog.below[k][other] for other in highs)]
    if len(least) != 1:
        return None
    return catalog.sets[least[0]]


def classical_gale_shapley(
    men_prefs: Sequence[Sequence[int]], women_prefs: Sequence[Sequence[int]]
) -> frozenset[tuple[int, int]]:
    """Textbook man-proposing deferred acceptance on complete strict lists.

    Returns the man-optimal stable matching as (man, woman) pairs.  Serves
    as the independent reference for engine runs on marriage instances.
    """
    woman_rank = [
        {man: rank for rank, man in enumerate(prefs)} for prefs in women_prefs
    ]
    next_proposal = [0] * len(men_prefs)
    engaged: dict[int, int] = {}
    free = list(reversed(range(len(men_prefs))))
    while free:
        man = free.pop()
        if next_proposal[man] >= len(men_prefs[man]):
            continue
        woman = men_prefs[man][next_proposal[man]]
        next_proposal[man] += 1
        if woman not in engaged:
            engaged[woman] = man
        elif woman_rank[woman][man] < woman_rank[woman][engaged[woman]]:
            free.append(engaged[woman])
            engaged[woman] = man
        else:
            free.append(man)
    return frozenset((man, woman) for woman, man in engaged.items())
