"""Minimal conflict extraction by recursive divide and conquer.

Given a consistency oracle, a consistent background, and an ordered list of
candidate constraints, `quickxplain` returns one minimal conflict set: a
subset of the candidates that is inconsistent together with the background
while every proper subset stays consistent. The recursion checks the
background plus the first half of the candidates; whenever that is already
inconsistent the other half is discarded without inspection, which is what
keeps the number of oracle calls logarithmic in the candidate count for
small conflicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .csp import Check, ConstraintRef, InconsistentBackgroundError


@dataclass(frozen=True)
class ConflictSet:
    """Minimal inconsistent candidate subset, in candidate order."""

    elements: tuple[ConstraintRef, ...]

    def as_set(self) -> frozenset[ConstraintRef]:
        return frozenset(self.elements)


def quickxplain(
    check: Check,
    background: Iterable[ConstraintRef],
    candidates: Sequence[ConstraintRef],
) -> ConflictSet | None:
    """One preferred minimal conflict among `candidates`, or None if consistent.

    Raises InconsistentBackgroundError when the background alone already
    fails: a conflict among the candidates is then meaningless.
    """
    base = frozenset(background)
    ordered = list(candidates)
    if not check(base):
        raise InconsistentBackgroundError("background is inconsistent on its own")
    if check(base | set(ordered)):
        return None
    return ConflictSet(tuple(_reduce(check, base, False, ordered)))


def _reduce(
    check: Check,
    base: frozenset[ConstraintRef],
    just_added: bool,
    candidates: list[ConstraintRef],
) -> list[ConstraintRef]:
    # invariant: base ∪ candidates is inconsistent
    if just_added and not check(base):
        return []
    if len(candidates) == 1:
        return list(candidates)
    mid = (len(candidates) + 1) // 2
    first, second = candidates[:mid], candidates[mid:]
    part2 = _reduce(check, base | set(first), True, second)
    part1 = _reduce(check, base | set(part2), bool(part2), first)
    return part1 + part2
