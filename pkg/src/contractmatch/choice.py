"""Choice functions over a finite contract universe.

A choice function maps every subset ``A`` of the universe to a chosen subset
``f(A)``.  The well-behaved ones are *coherent*: they satisfy Contraction
(``f(A) <= A``), rejection consistency (removing a rejected contract never
shrinks the choice) and Substitutes (a contract chosen from a large pool is
still chosen from any smaller pool containing it).  The checkers live in
:mod:`contractmatch.coherence`; this module provides the evaluators.

Each variant is a frozen dataclass with a declarative payload plus a
``choose_mask`` evaluator working on bitmask subsets (see
:mod:`contractmatch.sets`).  Variants whose payload only covers part of the
universe (an order over a strict subset of contracts, say) expose that part
as ``domain_mask``; evaluating them outside the domain raises
:class:`~contractmatch.errors.DomainError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, SpecError
from .sets import bit, format_mask, full_mask, iter_submasks, mask_of


class ChoiceFunction:
    """Base class for all choice-function variants.

    Subclasses carry a universe size ``n`` and implement ``_choose`` on
    masks that were already validated against ``domain_mask``.
    """

    n: int

    @property
    def domain_mask(self) -> int:
        """The subsets this function is defined on (submasks of this mask)."""
        return full_mask(self.n)

    def choose_mask(self, subset: int) -> int:
        """Evaluate the function on a subset given as a bitmask."""
        if subset < 0 or subset & ~self.domain_mask:
            raise DomainError(
                f"subset {format_mask(subset & ~self.domain_mask if subset >= 0 else subset)}"
                f" lies outside the declared domain {format_mask(self.domain_mask)}"
            )
        return self._choose(subset)

    def _choose(self, subset: int) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(ChoiceFunction):
    """Chooses every offered contract: ``f(A) = A``.  Trivially coherent."""

    n: int

    def _choose(self, subset: int) -> int:
        return subset


@dataclass(frozen=True)
class TableChoice(ChoiceFunction):
    """An explicit lookup table with one entry per subset of the universe.

    ``entries[m]`` is the chosen mask for the subset with bitmask ``m``.
    Tables may deliberately violate any axiom (entries need not be submasks
    of their argument); they are the raw material for checker tests.
    """

    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        size = 1 << self.n
        if len(self.entries) != size:
            raise SpecError(
                f"table must define every subset exactly once:"
                f" got {len(self.entries)} entries for a {self.n}-contract universe"
                f" ({size} subsets)"
            )
        universe = full_mask(self.n)
        for m, out in enumerate(self.entries):
            if out < 0 or out & ~universe:
                raise SpecError(
                    f"table entry for {format_mask(m)} chooses contracts"
                    f" outside the universe: {format_mask(out)}"
                )

    def _choose(self, subset: int) -> int:
        return self.entries[subset]


@dataclass(frozen=True)
class TopOfOrder(ChoiceFunction):
    """Chooses the single best available contract of a strict ranking.

    ``order`` lists contract ids best-first and fixes the domain: the
    function is only defined on subsets of the ranked contracts.  The empty
    set maps to the empty set.
    """

    n: int
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        _validate_ranking(self.order, self.n)
        object.__setattr__(self, "_domain", mask_of(self.order))

    @property
    def domain_mask(self) -> int:
        return self._domain  # type: ignore[attr-defined]

    def _choose(self, subset: int) -> int:
        for contract in self.order:
            if subset >> contract & 1:
                return bit(contract)
        return 0


@dataclass(frozen=True)
class ResponsiveQuota(ChoiceFunction):
    """Chooses the ``quota`` best available contracts of a strict ranking.

    Defined on subsets of the ranked contracts.  With ``quota=1`` this is
    :class:`TopOfOrder`; with ``quota=0`` it chooses nothing.
    """

    n: int
    order: tuple[int, ...]
    quota: int

    def __post_init__(self) -> None:
        _validate_ranking(self.order, self.n)
        if self.quota < 0:
            raise SpecError(f"quota must be non-negative, got {self.quota}")
        object.__setattr__(self, "_domain", mask_of(self.order))

    @property
    def domain_mask(self) -> int:
        return self._domain  # type: ignore[attr-defined]

    def _choose(self, subset: int) -> int:
        chosen = 0
        left = self.quota
        for contract in self.order:
            if left == 0:
                break
            if subset >> contract & 1:
                chosen |= bit(contract)
                left -= 1
        return chosen


@dataclass(frozen=True)
class UnionOfOrders(ChoiceFunction):
    """Chooses the best available contract of each of several total orders.

    Every order must rank the whole universe.  Functions of this shape are
    always coherent, and conversely every coherent function arises this way
    from some finite family of orders, so this variant doubles as a
    generator of arbitrary coherent functions.
    """

    n: int
    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.orders:
            raise SpecError("union-of-orders needs at least one order")
        for order in self.orders:
            if sorted(order) != list(range(self.n)):
                raise SpecError(
                    f"order {order!r} must rank every contract of the"
                    f" {self.n}-contract universe exactly once"
                )

    def _choose(self, subset: int) -> int:
        chosen = 0
        for order in self.orders:
            for contract in order:
                if subset >> contract & 1:
                    chosen |= bit(contract)
                    break
        return chosen


def _validate_ranking(order: Sequence[int], n: int) -> None:
    if len(set(order)) != len(order):
        raise SpecError(f"ranking {order!r} repeats a contract")
    for contract in order:
        if not 0 <= contract < n:
            raise SpecError(f"ranking {order!r} names contract {contract} outside the universe")


# ---------------------------------------------------------------------------
# Valuation-driven choice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationScheme:
    """Per-contract tie-breaking prices subtracted from a subset valuation.

    Subtracting a tiny price ``prices[x]`` for every chosen contract turns a
    subset valuation with ties into one with a unique maximizer on every
    menu, without ever changing which unperturbed values are maximal.  For
    that to hold the prices must stay within ``[0, epsilon]`` and ``epsilon``
    must be below ``gap / n``, where ``gap`` is the smallest difference
    between distinct valuation values.

    The default scheme deducts strictly more from later contract ids
    (``epsilon * (1 - 2**-(x+1))``), so value ties resolve in favor of the
    lowest-id contracts.
    """

    epsilon: Fraction
    prices: tuple[Fraction, ...]

    @classmethod
    def dyadic(cls, n: int, epsilon: Fraction | int) -> "PerturbationScheme":
        eps = Fraction(epsilon)
        prices = tuple(eps * (1 - Fraction(1, 2 ** (x + 1))) for x in range(n))
        return cls(eps, prices)

    @classmethod
    def for_valuation(cls, values: Sequence[Fraction]) -> "PerturbationScheme":
        """A safe default scheme for the given valuation table."""
        n = _universe_bits(len(values))
        gap = _min_gap(values)
        eps = gap / (2 * n) if gap is not None else Fraction(1)
        return cls.dyadic(n, eps)


def _universe_bits(table_len: int) -> int:
    n = max(table_len - 1, 0).bit_length()
    if table_len != 1 << n:
        raise SpecError(
            f"valuation table must have one entry per subset (a power of two);"
            f" got {table_len} entries"
        )
    return n


def _min_gap(values: Sequence[Fraction]) -> Fraction | None:
    """Smallest difference between distinct values, or None if all equal."""
    distinct = sorted(set(values))
    if len(distinct) < 2:
        return None
    return min(b - a for a, b in zip(distinct, distinct[1:]))


@dataclass(frozen=True)
class ValuationArgmax(ChoiceFunction):
    """Chooses the subset of the menu maximizing a perturbed valuation.

    ``values[m]`` is the (exact, rational) value of the subset with bitmask
    ``m``.  The scheme's prices are subtracted per chosen contract; the
    construction validates that the perturbed valuation has a *unique*
    maximizer on every menu and that this maximizer also attains the
    unperturbed maximum.
    """

    n: int
    values: tuple[Fraction, ...]
    scheme: PerturbationScheme

    def __post_init__(self) -> None:
        if _universe_bits(len(self.values)) != self.n:
            raise SpecError(
                f"valuation table covers {_universe_bits(len(self.values))} contracts,"
                f" expected {self.n}"
            )
        self._validate_scheme()
        perturbed = self._perturbed_values()
        object.__setattr__(self, "_table", self._argmax_table(perturbed))

    def _validate_scheme(self) -> None:
        s = self.scheme
        if len(s.prices) != self.n:
            raise SpecError(f"scheme prices cover {len(s.prices)} contracts, expected {self.n}")
        if s.epsilon <= 0:
            raise SpecError("scheme epsilon must be positive")
        for x, p in enumerate(s.prices):
            if not 0 <= p <= s.epsilon:
                raise SpecError(f"price for contract {x} must lie in [0, epsilon], got {p}")
        gap = _min_gap(self.values)
        if gap is not None and self.n and not s.epsilon < gap / self.n:
            raise SpecError(
                f"epsilon {s.epsilon} too large: must be below gap/n = {gap}/{self.n}"
                f" so perturbation can never override a real value difference"
            )

    def _perturbed_values(self) -> list[Fraction]:
        size = 1 << self.n
        price_sum = [Fraction(0)] * size
        for m in range(1, size):
            low = (m & -m).bit_length() - 1
            price_sum[m] = price_sum[m & (m - 1)] + self.scheme.prices[low]
        return [self.values[m] - price_sum[m] for m in range(size)]

    def _argmax_table(self, perturbed: list[Fraction]) -> tuple[int, ...]:
        table = []
        for menu in range(1 << self.n):
            best, best_value, tied = 0, perturbed[0], False
            for sub in iter_submasks(menu):
                if sub == 0:
                    continue
                v = perturbed[sub]
                if v > best_value:
                    best, best_value, tied = sub, v, False
                elif v == best_value:
                    tied = True
            if tied:
                raise SpecError(
                    f"perturbation scheme fails to break ties on menu {format_mask(menu)};"
                    f" choose distinct prices or a smaller epsilon"
                )
            table.append(best)
        return tuple(table)

    def _choose(self, subset: int) -> int:
        return self._table[subset]  # type: ignore[attr-defined]


def valuation_choice(
    values: Sequence[Fraction | int],
    scheme: PerturbationScheme | None = None,
) -> ValuationArgmax:
    """Build the choice function of a subset valuation.

    ``values`` must have one entry per subset of the universe, indexed by
    bitmask.  When ``scheme`` is omitted a safe default is derived from the
    table.
    """
    table = tuple(Fraction(v) for v in values)
    n = _universe_bits(len(table))
    if scheme is None:
        scheme = PerturbationScheme.for_valuation(table)
    return ValuationArgmax(n, table, scheme)


def union_of_orders_choice(orders: Sequence[Sequence[int]], n: int) -> UnionOfOrders:
    """Build the choice function selecting the top of each given total order."""
    return UnionOfOrders(n, tuple(tuple(order) for order in orders))


def convolve_valuations(
    first: Sequence[Fraction | int], second: Sequence[Fraction | int]
) -> tuple[Fraction, ...]:
    """Sup-convolution of two subset valuations over a common universe.

    ``out[A] = max over B <= A of first[B] + second[A - B]``: the best joint
    value achievable by splitting the menu between two agents.  Exposed as a
    computable object only; no relationship to aggregated choice functions
    is asserted.
    """
    a = tuple(Fraction(v) for v in first)
    b = tuple(Fraction(v) for v in second)
    n = _universe_bits(len(a))
    if _universe_bits(len(b)) != n:
        raise SpecError("valuations must share one universe to be convolved")
    out = []
    for menu in range(1 << n):
        out.append(max(a[sub] + b[menu ^ sub] for sub in iter_submasks(menu)))
    return tuple(out)


def tabulate(f: ChoiceFunction) -> TableChoice:
    """Materialize any full-domain choice function as an explicit table."""
    if f.domain_mask != full_mask(f.n):
        raise DomainError("only functions defined on the full universe can be tabulated")
    return TableChoice(f.n, tuple(f.choose_mask(m) for m in range(1 << f.n)))
