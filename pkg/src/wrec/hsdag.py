"""Breadth-first hitting-set enumeration of all minimal diagnoses.

The conflict-driven baseline: build a DAG whose nodes are removal sets,
label each node with a minimal conflict of the remaining constraints (from
`conflict.quickxplain`), and branch on the label's elements. A node whose
remaining constraints are consistent is a diagnosis. Breadth-first order
plus subset pruning yields exactly the minimal diagnoses, smallest first;
the labels collected along the way are exactly the minimal conflicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .conflict import ConflictSet, quickxplain
from .csp import Check, ConstraintRef, InconsistentBackgroundError, ref_id
from .model import KIND_REQUIREMENTS, Diagnosis


@dataclass(frozen=True)
class DiagnosisEnumeration:
    """All minimal diagnoses; `consistent` is True when nothing needed removal."""

    diagnoses: tuple[Diagnosis, ...]
    consistent: bool


def all_minimal_diagnoses(
    check: Check,
    background: Iterable[ConstraintRef],
    diagnosable: Sequence[ConstraintRef],
    max_cardinality: int | None = None,
    max_count: int | None = None,
    kind: str = KIND_REQUIREMENTS,
) -> DiagnosisEnumeration:
    """Every minimal diagnosis, cardinality ascending.

    Ties within one cardinality follow the `diagnosable` ordering (compared
    by the sorted positions of their elements). Optional caps limit the
    result without affecting the order of what is returned.
    """
    paths, _, consistent = _expand(check, background, diagnosable, max_cardinality, max_count)
    diagnoses = tuple(
        Diagnosis(frozenset(ref_id(ref) for ref in path), kind) for path in paths
    )
    return DiagnosisEnumeration(diagnoses=diagnoses, consistent=consistent)


def all_minimal_conflicts(
    check: Check,
    background: Iterable[ConstraintRef],
    candidates: Sequence[ConstraintRef],
) -> list[ConflictSet]:
    """Every minimal conflict of `candidates` against the background.

    Runs the hitting-set expansion to exhaustion and returns the node labels
    in discovery order: any minimal conflict missing from the labels would
    leave some unpruned node consistent-looking, so completion of the DAG
    implies completeness of the label set.
    """
    _, conflicts, _ = _expand(check, background, candidates, None, None)
    return list(conflicts)


def _expand(
    check: Check,
    background: Iterable[ConstraintRef],
    diagnosable: Sequence[ConstraintRef],
    max_cardinality: int | None,
    max_count: int | None,
) -> tuple[list[frozenset[ConstraintRef]], list[ConflictSet], bool]:
    base = frozenset(background)
    ordered = list(diagnosable)
    position = {ref: i for i, ref in enumerate(ordered)}
    if not check(base):
        raise InconsistentBackgroundError("background is inconsistent on its own")
    if check(base | set(ordered)):
        return [], [], True

    diagnoses: list[frozenset[ConstraintRef]] = []
    conflicts: list[ConflictSet] = []
    seen: set[frozenset[ConstraintRef]] = {frozenset()}
    level: list[frozenset[ConstraintRef]] = [frozenset()]
    depth = 0

    while level:
        next_level: list[frozenset[ConstraintRef]] = []
        found: list[frozenset[ConstraintRef]] = []
        for path in level:
            if any(d <= path for d in diagnoses):
                continue  # a smaller diagnosis already covers this node
            label = next((cs for cs in conflicts if not (cs.as_set() & path)), None)
            if label is None:
                rest = [ref for ref in ordered if ref not in path]
                fresh = quickxplain(check, base, rest)
                if fresh is None:
                    found.append(path)
                    continue
                conflicts.append(fresh)
                label = fresh
            for element in label.elements:
                child = path | {element}
                if child not in seen:
                    seen.add(child)
                    next_level.append(child)

        found.sort(key=lambda d: tuple(sorted(position[ref] for ref in d)))
        for diagnosis in found:
            diagnoses.append(diagnosis)
            if max_count is not None and len(diagnoses) >= max_count:
                return diagnoses, conflicts, False

        depth += 1
        if max_cardinality is not None and depth > max_cardinality:
            break
        level = next_level

    return diagnoses, conflicts, False
