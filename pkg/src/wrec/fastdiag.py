"""Direct diagnosis: find preferred minimal removal sets without conflicts.

Given candidates ordered most-important-first, a divide-and-conquer pass
(`fastdiag`) computes the preferred minimal diagnosis directly from
consistency checks, keeping important elements and sacrificing unimportant
ones first. `leading_diagnoses` wraps it in a breadth-first expansion that
forces diagnosed elements back in one at a time, yielding the top-n
diagnoses in preference order.

Preference is resolved lexicographically over sorted candidate positions:
among minimal diagnoses, the one whose sorted position tuple is greatest
removes the least important elements it can. The recursion realizes this by
splitting the candidate list reversed, so the least important elements are
offered for removal first.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .csp import (
    Check,
    ConstraintRef,
    InconsistentBackgroundError,
    RequirementRef,
    ref_id,
)
from .model import KIND_REQUIREMENTS, Diagnosis, KnowledgeBase, Requirement


class NoDiagnosisError(InconsistentBackgroundError):
    """No removal of candidates can restore consistency."""


def fastdiag(
    check: Check,
    diagnosable: Sequence[ConstraintRef],
    background: Iterable[ConstraintRef] = (),
    kind: str = KIND_REQUIREMENTS,
) -> Diagnosis:
    """The preferred minimal diagnosis of `diagnosable` (most-important-first).

    Raises NoDiagnosisError when even removing everything leaves the
    background inconsistent. Returns the empty diagnosis when nothing needs
    removal.
    """
    ordered = list(diagnosable)
    if len(set(ordered)) != len(ordered):
        raise ValueError("duplicate diagnosable elements")
    base = frozenset(background)
    if not check(base):
        raise NoDiagnosisError("not repairable: background is inconsistent on its own")
    if check(base | set(ordered)):
        return Diagnosis(frozenset(), kind)

    def consistent(context: Iterable[ConstraintRef]) -> bool:
        return check(base | set(context))

    # Offer least-important elements first: the recursion diagnoses the
    # front of the list it is given, so hand it the reversed ordering.
    removal = _fd(consistent, False, list(reversed(ordered)), set(ordered))
    return Diagnosis(frozenset(ref_id(ref) for ref in removal), kind)


def _fd(
    consistent,
    just_removed: bool,
    candidates: list[ConstraintRef],
    context: set[ConstraintRef],
) -> list[ConstraintRef]:
    if just_removed and consistent(context):
        return []
    if len(candidates) == 1:
        return list(candidates)
    mid = (len(candidates) + 1) // 2
    first, second = candidates[:mid], candidates[mid:]
    d1 = _fd(consistent, True, second, context - set(first))
    d2 = _fd(consistent, bool(d1), first, context - set(d1))
    return d1 + d2


def leading_diagnoses(
    check: Check,
    diagnosable: Sequence[ConstraintRef],
    background: Iterable[ConstraintRef] = (),
    n: int = 3,
    kind: str = KIND_REQUIREMENTS,
) -> list[Diagnosis]:
    """Up to `n` minimal diagnoses in descending preference order.

    Expands a breadth-first tree: each node forces some elements of an
    already-found diagnosis back into the background and diagnoses the
    rest. The first result is exactly `fastdiag`'s answer; later results
    are the next-preferred alternatives.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ordered = list(diagnosable)
    base = frozenset(background)
    if not check(base):
        raise NoDiagnosisError("not repairable: background is inconsistent on its own")
    if check(base | set(ordered)):
        return []

    found: list[Diagnosis] = []
    found_sets: list[frozenset[ConstraintRef]] = []
    root = fastdiag(check, ordered, base, kind)
    root_refs = frozenset(ref for ref in ordered if ref_id(ref) in root.elements)
    found.append(root)
    found_sets.append(root_refs)

    queue: list[tuple[frozenset[ConstraintRef], frozenset[ConstraintRef]]] = [
        (root_refs, frozenset())
    ]
    seen: set[frozenset[ConstraintRef]] = {frozenset()}
    while queue and len(found) < n:
        next_queue: list[tuple[frozenset[ConstraintRef], frozenset[ConstraintRef]]] = []
        for diag_refs, forced in queue:
            for element in (ref for ref in ordered if ref in diag_refs):
                forced2 = forced | {element}
                if forced2 in seen:
                    continue
                seen.add(forced2)
                if not check(base | forced2):
                    continue  # forcing this element back is itself infeasible
                rest = [ref for ref in ordered if ref not in forced2]
                child = fastdiag(check, rest, base | forced2, kind)
                child_refs = frozenset(
                    ref for ref in rest if ref_id(ref) in child.elements
                )
                if not child_refs:
                    continue  # cannot happen: forced2 alone stays inconsistent
                if any(prior <= child_refs for prior in found_sets):
                    next_queue.append((child_refs, forced2))
                    continue
                found.append(child)
                found_sets.append(child_refs)
                next_queue.append((child_refs, forced2))
                if len(found) >= n:
                    return found
        queue = next_queue
    return found


def keep_filter(
    requirements: Sequence[Requirement], kb: KnowledgeBase
) -> tuple[tuple[RequirementRef, ...], frozenset[RequirementRef]]:
    """Split requirements into (diagnosable most-important-first, pinned).

    Requirements on keep-marked variables are pinned to the background and
    never offered for removal; the rest are ordered by entry rank, earliest
    entered first (most important).
    """
    pinned = frozenset(
        RequirementRef(r) for r in requirements if kb.user_var(r.var).keep
    )
    movable = sorted(
        (r for r in requirements if not kb.user_var(r.var).keep),
        key=lambda r: r.entry_rank,
    )
    return tuple(RequirementRef(r) for r in movable), pinned
