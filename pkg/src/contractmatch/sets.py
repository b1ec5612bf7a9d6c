"""Bitmask utilities for subsets of a fixed contract universe.

Contracts are identified by integer ids ``0 .. n-1``.  A subset of the
universe is stored as a plain Python int: bit ``i`` is set exactly when
contract ``i`` is in the subset.  Ints give O(1) union / intersection /
equality and make exhaustive scans over all ``2**n`` subsets cheap, which
is what every checker and oracle in this package relies on.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def full_mask(n: int) -> int:
    """The subset containing every contract of an ``n``-contract universe."""
    return (1 << n) - 1


def bit(contract: int) -> int:
    """The singleton subset ``{contract}``."""
    return 1 << contract


def mask_of(contracts: Iterable[int]) -> int:
    """Build a subset mask from an iterable of contract ids."""
    mask = 0
    for c in contracts:
        mask |= 1 << c
    return mask


def ids_of(mask: int) -> tuple[int, ...]:
    """Contract ids present in ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    """Number of contracts in the subset."""
    return mask.bit_count()


def iter_submasks(mask: int) -> Iterator[int]:
    """Every subset of ``mask`` in increasing numeric order (0 and mask included)."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def subset_names(mask: int, names: Sequence[str]) -> list[str]:
    """The names of the contracts in ``mask``, sorted alphabetically."""
    return sorted(names[i] for i in ids_of(mask))


def format_mask(mask: int, names: Sequence[str] | None = None) -> str:
    """Human-readable rendering of a subset, e.g. ``{a, b}``."""
    if names is None:
        items = [str(i) for i in ids_of(mask)]
    else:
        items = subset_names(mask, names)
    return "{" + ", ".join(items) + "}"
