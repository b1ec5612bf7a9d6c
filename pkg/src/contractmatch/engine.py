"""Two-sided agreement problems and the deferred-acceptance engine.

An :class:`Instance` pairs one choice function per side over a shared
contract universe.  An *agreement* is a set both sides would keep exactly
(``f1(A) == A == f2(A)``); it is *stable* when no outside contract (or, in
full mode, no outside set) would be accepted by both sides on top of it.

:func:`run` executes the offer/reject iteration: the proposing side offers
its choice from the current pool, the other side keeps what it likes, and
everything offered but not kept leaves the pool for good.  The pool only
shrinks, so a fixpoint is reached after at most ``n + 1`` rounds; the
proposer's choice from the final pool is the candidate agreement.  On
coherent instances it is the proposer-optimal stable agreement; the run
itself never assumes coherence (useful precisely for demonstrating how the
iteration fails on incoherent inputs) and reports the instance's recorded
coherence status alongside its claims.

Stable agreements of a coherent instance form a lattice under the revealed
preference of either side: :func:`meet` and :func:`join` compute greatest
lower / least upper bounds by re-running the iteration from a pool built
out of revealed-preference closures.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from . import limits
from .choice import ChoiceFunction
from .errors import DomainError, PreconditionError, SizeBoundError, SpecError
from .preference import COHERENCE_UNKNOWN, closure
from .sets import format_mask, full_mask, ids_of, iter_submasks, mask_of, popcount

MODE_SINGLETON = "singleton"
MODE_FULL = "full"


@dataclass(frozen=True)
class ContractLabel:
    """Names of the two agents a contract is between (side 1, side 2)."""

    side1: str
    side2: str


@dataclass(frozen=True)
class Instance:
    """A two-sided agreement problem over a shared contract universe."""

    names: tuple[str, ...]
    f1: ChoiceFunction
    f2: ChoiceFunction
    labels: tuple[ContractLabel, ...] | None = None
    coherence: str = COHERENCE_UNKNOWN

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n or any(not s for s in self.names):
            raise SpecError("contract names must be unique and non-empty")
        for side, f in ((1, self.f1), (2, self.f2)):
            if f.n != n:
                raise SpecError(
                    f"side-{side} function covers {f.n} contracts, universe has {n}"
                )
            if f.domain_mask != full_mask(n):
                raise SpecError(
                    f"side-{side} function must be defined on the full universe"
                )
        if self.labels is not None and len(self.labels) != n:
            raise SpecError("labels must cover every contract exactly once")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def universe(self) -> int:
        return full_mask(self.n)

    def side(self, which: int) -> ChoiceFunction:
        if which == 1:
            return self.f1
        if which == 2:
            return self.f2
        raise ValueError(f"side must be 1 or 2, got {which}")

    def mask_of_names(self, chosen: Sequence[str]) -> int:
        index = {name: i for i, name in enumerate(self.names)}
        try:
            return mask_of(index[name] for name in chosen)
        except KeyError as e:
            raise SpecError(f"unknown contract name {e.args[0]!r}") from None

    def names_of(self, mask: int) -> list[str]:
        return sorted(self.names[i] for i in ids_of(mask))

    def with_coherence(self, status: str) -> "Instance":
        return replace(self, coherence=status)


def auto_names(n: int) -> tuple[str, ...]:
    """Default contract names x0, x1, ... for programmatically built instances."""
    return tuple(f"x{i}" for i in range(n))


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementVerdict:
    """Whether both sides keep a subset exactly, with each side's choice."""

    subject: int
    side1_choice: int
    side2_choice: int

    @property
    def holds(self) -> bool:
        return self.side1_choice == self.subject == self.side2_choice

    def describe(self, names: Sequence[str] | None = None) -> str:
        if self.holds:
            return f"{format_mask(self.subject, names)} is an agreement"
        parts = []
        for side, choice in ((1, self.side1_choice), (2, self.side2_choice)):
            if choice != self.subject:
                parts.append(f"side {side} keeps {format_mask(choice, names)}")
        return f"{format_mask(self.subject, names)} is not an agreement: " + ", ".join(parts)


@dataclass(frozen=True)
class StabilityVerdict:
    """Whether a subset resists outside additions, with a minimal witness."""

    subject: int
    mode: str
    blocking_set: int | None

    @property
    def stable(self) -> bool:
        return self.blocking_set is None

    @property
    def blocking_contract(self) -> int | None:
        """The blocking contract id when the witness is a singleton."""
        if self.blocking_set is None or popcount(self.blocking_set) != 1:
            return None
        return self.blocking_set.bit_length() - 1

    def describe(self, names: Sequence[str] | None = None) -> str:
        if self.stable:
            return f"{format_mask(self.subject, names)} is stable ({self.mode} mode)"
        return (
            f"{format_mask(self.subject, names)} is blocked by"
            f" {format_mask(self.blocking_set or 0, names)} ({self.mode} mode)"
        )


@dataclass(frozen=True)
class Trace:
    """Per-round record of one engine run.

    Round ``j`` starts from pool ``pools[j]``; the proposer offers
    ``offers[j]``; the other side keeps ``accepted[j]``.  The last pool is
    the fixpoint: applying one more round reproduces it.
    """

    pools: tuple[int, ...]
    offers: tuple[int, ...]
    accepted: tuple[int, ...]

    @property
    def iterations(self) -> int:
        return len(self.pools)

    @property
    def final_pool(self) -> int:
        return self.pools[-1]


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one engine run: candidate set, trace, and verdicts."""

    chosen: int
    proposer: int
    trace: Trace
    agreement: AgreementVerdict
    stability: StabilityVerdict
    coherence: str

    @property
    def stable_agreement(self) -> bool:
        return self.agreement.holds and self.stability.stable


# ---------------------------------------------------------------------------
# The iteration
# ---------------------------------------------------------------------------


def run(instance: Instance, proposer: int = 1, pool: int | None = None) -> SolveResult:
    """Run deferred acceptance from ``pool`` (default: the full universe).

    Each round the proposing side offers its choice from the pool, the
    other side accepts its choice among the offers, and rejected offers
    leave the pool.  Stops at the first repeated pool and returns the
    proposer's choice there, with agreement/stability verdicts evaluated
    against the full universe.
    """
    propose = instance.side(proposer)
    other = instance.side(3 - proposer)
    z = instance.universe if pool is None else pool
    if z & ~instance.universe:
        raise DomainError(f"pool {format_mask(z)} exceeds the universe")

    pools: list[int] = []
    offers: list[int] = []
    accepted: list[int] = []
    while True:
        offer = propose.choose_mask(z)
        keep = other.choose_mask(offer)
        pools.append(z)
        offers.append(offer)
        accepted.append(keep)
        next_z = (z & ~offer) | keep
        if next_z == z:
            break
        z = next_z

    chosen = offers[-1]
    return SolveResult(
        chosen=chosen,
        proposer=proposer,
        trace=Trace(tuple(pools), tuple(offers), tuple(accepted)),
        agreement=_agreement_verdict(instance, chosen),
        stability=_singleton_stability(instance, chosen),
        coherence=instance.coherence,
    )


# ---------------------------------------------------------------------------
# Agreement and stability predicates
# ---------------------------------------------------------------------------


def _agreement_verdict(instance: Instance, subset: int) -> AgreementVerdict:
    return AgreementVerdict(
        subject=subset,
        side1_choice=instance.f1.choose_mask(subset),
        side2_choice=instance.f2.choose_mask(subset),
    )


def is_agreement(instance: Instance, subset: int) -> AgreementVerdict:
    """Does each side keep ``subset`` exactly?"""
    return _agreement_verdict(instance, subset)


def _singleton_stability(instance: Instance, subset: int) -> StabilityVerdict:
    outside = instance.universe & ~subset
    while outside:
        xbit = outside & -outside
        menu = subset | xbit
        if instance.f1.choose_mask(menu) & xbit and instance.f2.choose_mask(menu) & xbit:
            return StabilityVerdict(subset, MODE_SINGLETON, xbit)
        outside ^= xbit
    return StabilityVerdict(subset, MODE_SINGLETON, None)


def _full_stability(instance: Instance, subset: int, max_n: int | None) -> StabilityVerdict:
    free = popcount(instance.universe & ~subset)
    limit = limits.exhaustive_bound() if max_n is None else max_n
    if free > limit:
        raise SizeBoundError(
            f"full-mode stability scan refused: {free} outside contracts,"
            f" bound is {limit}"
        )
    outside = instance.universe & ~subset
    for block in iter_submasks(outside):
        if block == 0:
            continue
        menu = subset | block
        jointly_kept = instance.f1.choose_mask(menu) & instance.f2.choose_mask(menu)
        if block & ~jointly_kept == 0:
            return StabilityVerdict(subset, MODE_FULL, block)
    return StabilityVerdict(subset, MODE_FULL, None)


def is_stable_set(
    instance: Instance,
    subset: int,
    mode: str = MODE_SINGLETON,
    max_n: int | None = None,
) -> StabilityVerdict:
    """Does ``subset`` resist outside additions?

    Singleton mode tests one outside contract at a time; full mode tests
    every non-empty outside set (exponential in the number of outside
    contracts, hence bounded).  The two modes agree on coherent instances.
    Witnesses are minimal: the lowest-id contract, or the numerically first
    blocking set.
    """
    if mode == MODE_SINGLETON:
        return _singleton_stability(instance, subset)
    if mode == MODE_FULL:
        return _full_stability(instance, subset, max_n)
    raise ValueError(f"mode must be {MODE_SINGLETON!r} or {MODE_FULL!r}, got {mode!r}")


@dataclass(frozen=True)
class StableAgreementVerdict:
    """Conjunction of the agreement and stability checks."""

    agreement: AgreementVerdict
    stability: StabilityVerdict

    @property
    def holds(self) -> bool:
        return self.agreement.holds and self.stability.stable

    def describe(self, names: Sequence[str] | None = None) -> str:
        return f"{self.agreement.describe(names)}; {self.stability.describe(names)}"


def is_stable_agreement(
    instance: Instance, subset: int, mode: str = MODE_SINGLETON
) -> StableAgreementVerdict:
    """Is ``subset`` both an agreement and stable?"""
    return StableAgreementVerdict(
        agreement=_agreement_verdict(instance, subset),
        stability=is_stable_set(instance, subset, mode),
    )


# ---------------------------------------------------------------------------
# Lattice operations
# ---------------------------------------------------------------------------


def _require_stable(instance: Instance, subset: int, role: str) -> None:
    verdict = is_stable_agreement(instance, subset)
    if not verdict.holds:
        raise PreconditionError(
            f"{role} {format_mask(subset, instance.names)} is not a stable agreement:"
            f" {verdict.describe(instance.names)}"
        )


def meet(instance: Instance, first: int, second: int) -> int:
    """Greatest lower bound of two stable agreements in side 1's order.

    Re-runs the iteration with side 1 proposing, from the pool of contracts
    that both inputs beat (the intersection of their side-1 closures).
    Requires coherent side functions for its lattice guarantee; the inputs'
    stability is verified, coherence is the caller's assertion.
    """
    _require_stable(instance, first, "meet input")
    _require_stable(instance, second, "meet input")
    pool = closure(instance.f1, first) & closure(instance.f1, second)
    return run(instance, proposer=1, pool=pool).chosen


def join(instance: Instance, first: int, second: int) -> int:
    """Least upper bound of two stable agreements in side 1's order.

    Mirror image of :func:`meet`: side 1's least upper bound is side 2's
    greatest lower bound (the two sides' orders on stable agreements are
    inverse), so the iteration is re-run with side 2 proposing from the
    intersection of the side-2 closures.
    """
    _require_stable(instance, first, "join input")
    _require_stable(instance, second, "join input")
    pool = closure(instance.f2, first) & closure(instance.f2, second)
    return run(instance, proposer=2, pool=pool).chosen
