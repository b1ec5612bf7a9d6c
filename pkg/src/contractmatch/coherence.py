"""Exhaustive validation of the choice-function axioms.

A choice function is *coherent* when it satisfies all three of:

* **Contraction** -- ``f(A) <= A``: nothing is chosen that was not offered.
* **Rejection consistency** -- if ``x`` is offered but rejected, dropping
  ``x`` from the menu never removes anything else from the choice:
  ``x in A, x not in f(A)  =>  f(A - {x}) <= f(A)``.
* **Substitutes** -- a contract chosen from a menu is still chosen from any
  smaller menu containing it: ``x in B <= A, x in f(A)  =>  x in f(B)``.

Coherence is equivalent to Contraction plus *path independence*
(``f(A | B) = f(f(A) | B)``), and :func:`check_coherent` re-derives its
verdict through that second route as an internal cross-check.

All checkers enumerate the function's whole domain, so they refuse
universes above the bounds in :mod:`contractmatch.limits`.  Functions whose
declared domain is a strict subset of the universe are checked over that
domain (re-indexed internally to a compact space); witnesses are always
reported in global contract ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import limits
from .choice import ChoiceFunction
from .errors import SizeBoundError, SpecError
from .sets import format_mask, full_mask, ids_of, iter_submasks, popcount

AXIOM_CONTRACTION = "contraction"
AXIOM_IRC = "rejection-consistency"
AXIOM_SUBSTITUTES = "substitutes"
AXIOM_PATH = "path-independence"


@dataclass(frozen=True)
class ViolationReport:
    """One concrete counterexample to an axiom.

    ``set_a`` is always the larger menu involved; ``set_b`` (when the axiom
    compares two menus) the smaller or second one; ``contract`` the pivotal
    contract (when the axiom singles one out).  ``replay`` re-evaluates the
    counterexample through the function, so every report can be verified
    independently of the checker that produced it.
    """

    axiom: str
    set_a: int
    set_b: int | None = None
    contract: int | None = None

    def replay(self, f: ChoiceFunction) -> bool:
        """Re-run the counterexample; True means it still violates the axiom."""
        if self.axiom == AXIOM_CONTRACTION:
            return bool(f.choose_mask(self.set_a) & ~self.set_a)
        if self.axiom == AXIOM_IRC:
            x = self.contract
            assert x is not None and self.set_b == self.set_a & ~(1 << x)
            if not (self.set_a >> x & 1) or f.choose_mask(self.set_a) >> x & 1:
                return False
            return bool(f.choose_mask(self.set_b) & ~f.choose_mask(self.set_a))
        if self.axiom == AXIOM_SUBSTITUTES:
            x = self.contract
            assert x is not None and self.set_b is not None
            if self.set_b & ~self.set_a or not (self.set_b >> x & 1):
                return False
            return bool(f.choose_mask(self.set_a) >> x & 1) and not (
                f.choose_mask(self.set_b) >> x & 1
            )
        if self.axiom == AXIOM_PATH:
            assert self.set_b is not None
            union = self.set_a | self.set_b
            return f.choose_mask(union) != f.choose_mask(
                f.choose_mask(self.set_a) | self.set_b
            )
        raise ValueError(f"unknown axiom {self.axiom!r}")

    def describe(self, names: Sequence[str] | None = None) -> str:
        fa = lambda m: format_mask(m, names)  # noqa: E731
        cn = (
            None
            if self.contract is None
            else (names[self.contract] if names else str(self.contract))
        )
        if self.axiom == AXIOM_CONTRACTION:
            return f"{self.axiom}: choice from {fa(self.set_a)} leaves the menu"
        if self.axiom == AXIOM_IRC:
            return (
                f"{self.axiom}: dropping rejected {cn} from {fa(self.set_a)}"
                f" changes the choice beyond {cn}"
            )
        if self.axiom == AXIOM_SUBSTITUTES:
            return (
                f"{self.axiom}: {cn} chosen from {fa(self.set_a)}"
                f" but not from {fa(self.set_b or 0)}"
            )
        return (
            f"{self.axiom}: f({fa(self.set_a)} | {fa(self.set_b or 0)})"
            f" != f(f({fa(self.set_a)}) | {fa(self.set_b or 0)})"
        )


@dataclass(frozen=True)
class CoherenceReport:
    """Bundled verdict of all axiom checks for one function."""

    contraction: tuple[ViolationReport, ...]
    irc: tuple[ViolationReport, ...]
    substitutes: tuple[ViolationReport, ...]
    path_independence: tuple[ViolationReport, ...]

    @property
    def coherent(self) -> bool:
        return not (self.contraction or self.irc or self.substitutes)

    @property
    def cross_check_ok(self) -> bool:
        """Contraction + path independence must be equivalent to coherence.

        A False value here cannot be blamed on the input: it means one of
        the checkers is buggy.
        """
        via_path = not self.contraction and not self.path_independence
        return via_path == self.coherent

    def all_violations(self) -> tuple[ViolationReport, ...]:
        return self.contraction + self.irc + self.substitutes + self.path_independence

    def describe(self, names: Sequence[str] | None = None) -> str:
        if self.coherent:
            return "coherent"
        lines = [v.describe(names) for v in self.all_violations()]
        return "NOT coherent:\n  " + "\n  ".join(lines)


# ---------------------------------------------------------------------------
# Dense tables over a compact index space
# ---------------------------------------------------------------------------


class _Dense:
    """A choice function materialized as a dense table over its domain.

    Domains that are strict subsets of the universe are re-indexed to a
    compact ``0..k-1`` space; ``expand``/``reduce`` translate between the
    compact space and global contract ids.
    """

    def __init__(self, f: ChoiceFunction):
        domain = f.domain_mask
        self.ids = ids_of(domain)
        self.k = len(self.ids)
        self._direct = domain == full_mask(f.n)
        size = 1 << self.k
        if self._direct:
            self.table = [f.choose_mask(m) for m in range(size)]
        else:
            pos = {g: i for i, g in enumerate(self.ids)}
            table = []
            for local in range(size):
                out = f.choose_mask(self.expand(local))
                if out & ~domain:
                    raise SpecError(
                        "choice function leaves its own declared domain:"
                        f" f({format_mask(self.expand(local))}) = {format_mask(out)}"
                    )
                table.append(sum(1 << pos[g] for g in ids_of(out)))
            self.table = table

    def expand(self, local: int) -> int:
        if self._direct:
            return local
        mask = 0
        i = 0
        while local:
            if local & 1:
                mask |= 1 << self.ids[i]
            local >>= 1
            i += 1
        return mask


def _bound_check(f: ChoiceFunction, max_n: int | None, default: Callable[[], int], what: str) -> None:
    k = popcount(f.domain_mask)
    limit = default() if max_n is None else max_n
    if k > limit:
        raise SizeBoundError(
            f"{what} scan refused: domain has {k} contracts, bound is {limit}"
            f" (raise via max_n or the CONTRACTMATCH_*_BOUND environment variables)"
        )


# ---------------------------------------------------------------------------
# Individual axiom checks
# ---------------------------------------------------------------------------


def _contraction_violations(d: _Dense) -> list[ViolationReport]:
    return [
        ViolationReport(AXIOM_CONTRACTION, d.expand(m))
        for m in range(1 << d.k)
        if d.table[m] & ~m
    ]


def _irc_violations(d: _Dense) -> list[ViolationReport]:
    out = []
    table = d.table
    for m in range(1 << d.k):
        chosen = table[m]
        rejected = m & ~chosen
        while rejected:
            xbit = rejected & -rejected
            if table[m ^ xbit] & ~chosen:
                out.append(
                    ViolationReport(
                        AXIOM_IRC,
                        d.expand(m),
                        d.expand(m ^ xbit),
                        d.ids[xbit.bit_length() - 1],
                    )
                )
            rejected ^= xbit
    return out


def _substitutes_violations(d: _Dense) -> list[ViolationReport]:
    # Pairwise scan over (menu, submenu): 3**k pairs total.  For each
    # violating pair the lowest-id dropped contract is reported.
    out = []
    table = d.table
    for m in range(1 << d.k):
        chosen = table[m]
        if not chosen:
            continue
        for sub in iter_submasks(m):
            bad = sub & chosen & ~table[sub]
            if bad:
                out.append(
                    ViolationReport(
                        AXIOM_SUBSTITUTES,
                        d.expand(m),
                        d.expand(sub),
                        d.ids[(bad & -bad).bit_length() - 1],
                    )
                )
    return out


def _path_violations(d: _Dense) -> list[ViolationReport]:
    # 4**k ordered pairs, vectorized one second-operand at a time.
    size = 1 << d.k
    t = np.asarray(d.table, dtype=np.int64)
    menus = np.arange(size, dtype=np.int64)
    out = []
    for b in range(size):
        direct = t[menus | b]
        replayed = t[t | b]
        for a in np.nonzero(direct != replayed)[0]:
            out.append(ViolationReport(AXIOM_PATH, d.expand(int(a)), d.expand(b)))
    return out


def check_contraction(f: ChoiceFunction, max_n: int | None = None) -> list[ViolationReport]:
    """All Contraction counterexamples of ``f`` (empty list = axiom holds)."""
    _bound_check(f, max_n, limits.exhaustive_bound, "contraction")
    return _contraction_violations(_Dense(f))


def check_irc(f: ChoiceFunction, max_n: int | None = None) -> list[ViolationReport]:
    """All rejection-consistency counterexamples of ``f``."""
    _bound_check(f, max_n, limits.exhaustive_bound, "rejection-consistency")
    return _irc_violations(_Dense(f))


def check_substitutes(f: ChoiceFunction, max_n: int | None = None) -> list[ViolationReport]:
    """All Substitutes counterexamples of ``f`` (one per violating menu pair)."""
    _bound_check(f, max_n, limits.pairwise_bound, "substitutes")
    return _substitutes_violations(_Dense(f))


def check_path_independence(f: ChoiceFunction, max_n: int | None = None) -> list[ViolationReport]:
    """All path-independence counterexamples ``f(A|B) != f(f(A)|B)``."""
    _bound_check(f, max_n, limits.pairwise_bound, "path-independence")
    return _path_violations(_Dense(f))


def check_coherent(f: ChoiceFunction, max_n: int | None = None) -> CoherenceReport:
    """Run all axiom checks on one tabulation of ``f`` and bundle the verdicts.

    The report's ``cross_check_ok`` flag confirms that the axiom-by-axiom
    verdict agrees with the independent contraction-plus-path-independence
    characterization; a False flag indicates a checker bug, never bad input.
    """
    _bound_check(f, max_n, limits.exhaustive_bound, "coherence")
    _bound_check(f, max_n, limits.pairwise_bound, "coherence")
    d = _Dense(f)
    return CoherenceReport(
        contraction=tuple(_contraction_violations(d)),
        irc=tuple(_irc_violations(d)),
        substitutes=tuple(_substitutes_violations(d)),
        path_independence=tuple(_path_violations(d)),
    )
