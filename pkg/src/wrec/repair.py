"""Repairs for inconsistent requirements and the recommendation entry point.

A diagnosis says which requirements to drop; a repair says what to put in
their place. Repairs come from enumerating solutions of the reduced
requirement set and projecting each onto the diagnosed variables, keeping
distinct adaptations in search order. Each repair carries the products it
leads to and a support value, the fraction of original requirements given
up (removed count over total count).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .csp import (
    CheckStats,
    ProductPinRef,
    checker,
    consideration_set,
    is_consistent,
    iter_solutions,
    requirement_refs,
)
from .fastdiag import NoDiagnosisError, fastdiag, keep_filter, leading_diagnoses
from .model import (
    Diagnosis,
    KnowledgeBase,
    Repair,
    Requirement,
    UnrepairableError,
    Value,
)

STATUS_SOLUTIONS = "solutions"
STATUS_REPAIRS = "repairs"
STATUS_UNREPAIRABLE = "unrepairable"

DEFAULT_MAX_ALTERNATIVES = 10
DEFAULT_N_DIAGNOSES = 3


@dataclass(frozen=True)
class RepairGroup:
    """One diagnosis with its alternative repairs, in search order."""

    diagnosis: Diagnosis
    repairs: tuple[Repair, ...]


@dataclass(frozen=True)
class RecommendationResult:
    status: str
    items: tuple[str, ...] = ()
    groups: tuple[RepairGroup, ...] = ()


def repairs_for(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    diagnosis: Diagnosis,
    max_alternatives: int = DEFAULT_MAX_ALTERNATIVES,
    pin: str | None = None,
    stats: CheckStats | None = None,
) -> list[Repair]:
    """Alternative adaptations for the diagnosed variables, first-found order.

    Every repair replaces the removed requirements with concrete values such
    that the full set is consistent again (with `pin` forced, if given).
    """
    if max_alternatives < 1:
        raise ValueError("max_alternatives must be at least 1")
    kb.validate_requirements(requirements)
    by_var = {r.var: r for r in requirements}
    missing = [var for var in diagnosis.elements if var not in by_var]
    if missing:
        raise ValueError(f"diagnosis names unrequired variables: {sorted(missing)}")

    kept = [r for r in requirements if r.var not in diagnosis.elements]
    refs = requirement_refs(kept)
    if pin is not None:
        refs = refs + (ProductPinRef(pin),)
    if not is_consistent(kb, refs, stats=stats):
        raise ValueError("not a diagnosis: reduced requirements stay inconsistent")

    support = (
        Fraction(diagnosis.cardinality, len(requirements))
        if requirements
        else Fraction(0)
    )
    if diagnosis.empty:
        items = (pin,) if pin is not None else tuple(
            consideration_set(kb, list(requirements), stats=stats)
        )
        return [Repair(diagnosis=diagnosis, adaptation={}, items=items, support=support)]

    diagnosed = sorted(diagnosis.elements, key=lambda var: by_var[var].entry_rank)

    repairs: list[Repair] = []
    seen: set[tuple[tuple[str, Value], ...]] = set()
    for scenario in iter_solutions(kb, kept, pin=pin):
        if stats is not None:
            stats.solutions_enumerated += 1
        adaptation = {var: scenario.assignment[var] for var in diagnosed}
        key = tuple(adaptation.items())
        if key in seen:
            continue
        seen.add(key)
        repaired = [
            r if r.var not in adaptation
            else Requirement(r.var, adaptation[r.var], r.entry_rank)
            for r in requirements
        ]
        items = (pin,) if pin is not None else tuple(
            consideration_set(kb, repaired, stats=stats)
        )
        repairs.append(
            Repair(
                diagnosis=diagnosis,
                adaptation=adaptation,
                items=items,
                support=support,
            )
        )
        if len(repairs) >= max_alternatives:
            break
    return repairs


def recommend(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    n_diagnoses: int = DEFAULT_N_DIAGNOSES,
    max_alternatives: int = DEFAULT_MAX_ALTERNATIVES,
    stats: CheckStats | None = None,
) -> RecommendationResult:
    """Answer a query: matching items, or diagnoses with repairs, or neither.

    Consistent requirements yield the consideration set. Inconsistent ones
    yield up to `n_diagnoses` diagnoses in preference order (requirements on
    keep-marked variables are never given up), each with repair
    alternatives. When not even dropping every non-keep requirement helps,
    the result is unrepairable.
    """
    kb.validate_requirements(requirements)
    refs = requirement_refs(requirements)
    if is_consistent(kb, refs, stats=stats):
        return RecommendationResult(
            status=STATUS_SOLUTIONS,
            items=tuple(consideration_set(kb, requirements, stats=stats)),
        )

    movable, pinned = keep_filter(requirements, kb)
    check = checker(kb, stats=stats)
    try:
        diagnoses = leading_diagnoses(check, movable, pinned, n=n_diagnoses)
    except NoDiagnosisError:
        return RecommendationResult(status=STATUS_UNREPAIRABLE)

    groups = tuple(
        RepairGroup(
            diagnosis=d,
            repairs=tuple(
                repairs_for(kb, requirements, d, max_alternatives, stats=stats)
            ),
        )
        for d in diagnoses
    )
    return RecommendationResult(status=STATUS_REPAIRS, groups=groups)


def recommend_for_item(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    product_name: str,
    max_alternatives: int = DEFAULT_MAX_ALTERNATIVES,
    stats: CheckStats | None = None,
) -> RecommendationResult:
    """Item-targeted recommendation: what to change so `product_name` fits.

    Same result shape as `recommend`, restricted to the one product: either
    the item already fits (solutions), or one diagnosis group explains what
    blocks it, or it cannot fit at all (unrepairable). Unknown product names
    raise ModelError.
    """
    kb.product(product_name)
    try:
        diagnosis, repairs = diagnose_for_item(
            kb, requirements, product_name, max_alternatives, stats=stats
        )
    except UnrepairableError:
        return RecommendationResult(status=STATUS_UNREPAIRABLE)
    if diagnosis.empty:
        return RecommendationResult(status=STATUS_SOLUTIONS, items=(product_name,))
    return RecommendationResult(
        status=STATUS_REPAIRS,
        groups=(RepairGroup(diagnosis=diagnosis, repairs=tuple(repairs)),),
    )


def diagnose_for_item(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    product_name: str,
    max_alternatives: int = DEFAULT_MAX_ALTERNATIVES,
    stats: CheckStats | None = None,
) -> tuple[Diagnosis, list[Repair]]:
    """Why an item fell out of the consideration set, and how to get it back.

    Diagnoses the requirements against the knowledge base with the product
    pinned. Raises UnrepairableError when the item is incompatible with the
    knowledge base itself or with the keep-marked requirements.
    """
    kb.product(product_name)
    kb.validate_requirements(requirements)
    pin = ProductPinRef(product_name)
    if not is_consistent(kb, (pin,), stats=stats):
        raise UnrepairableError(
            f"product {product_name} satisfies no scenario of the knowledge base"
        )

    movable, pinned = keep_filter(requirements, kb)
    check = checker(kb, stats=stats)
    try:
        diagnosis = fastdiag(check, movable, pinned | {pin})
    except NoDiagnosisError as exc:
        raise UnrepairableError(
            f"product {product_name} conflicts with requirements that must be kept"
        ) from exc
    repairs = repairs_for(
        kb,
        requirements,
        diagnosis,
        max_alternatives=max_alternatives,
        pin=product_name,
        stats=stats,
    )
    return diagnosis, repairs


__all__ = [
    "DEFAULT_MAX_ALTERNATIVES",
    "DEFAULT_N_DIAGNOSES",
    "RecommendationResult",
    "RepairGroup",
    "STATUS_REPAIRS",
    "STATUS_SOLUTIONS",
    "STATUS_UNREPAIRABLE",
    "diagnose_for_item",
    "recommend",
    "recommend_for_item",
    "repairs_for",
]
