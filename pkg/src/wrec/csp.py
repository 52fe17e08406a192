"""Finite-domain consistency oracle and solution enumeration.

One backtracking solver serves every caller through ConstraintRef
selections: requirement refs add unary user constraints, kb-constraint refs
re-activate knowledge-base constraints past an exclusion set (which is how
knowledge-base diagnosis probes subsets of COMP and FILT), and a product pin
restricts scenarios to one item. The product table itself acts as a
disjunction: picking any product row satisfies it.

Search order is fixed for reproducibility: products in definition order,
user variables in declaration order, enumerated values in declaration
order, integer values ascending. Wide integer ranges are not enumerated;
they are probed on a boundary grid (every relevant integer constant, every
range endpoint, each shifted by one), which decides the relations the DSL
can express without walking thousands of values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterable, Iterator, Sequence

from .model import (
    ConstraintExpr,
    EnumeratedDomain,
    FilterConstraint,
    Incompatibility,
    IntegerRangeDomain,
    KnowledgeBase,
    Literal,
    Operand,
    Product,
    PropRef,
    Requirement,
    UserVariable,
    Value,
    VarRef,
)

# ranges at most this wide are enumerated exhaustively
ENUMERATION_LIMIT = 64


class InconsistentBackgroundError(ValueError):
    """The background constraints are already inconsistent on their own."""


@dataclass(frozen=True)
class RequirementRef:
    requirement: Requirement


@dataclass(frozen=True)
class KbConstraintRef:
    cid: str


@dataclass(frozen=True)
class ProductPinRef:
    product: str


ConstraintRef = RequirementRef | KbConstraintRef | ProductPinRef

Check = Callable[[Iterable[ConstraintRef]], bool]


def requirement_refs(requirements: Sequence[Requirement]) -> tuple[RequirementRef, ...]:
    return tuple(RequirementRef(r) for r in requirements)


def ref_id(ref: ConstraintRef) -> str:
    """Stable identifier a diagnosis reports: variable name or constraint id."""
    if isinstance(ref, RequirementRef):
        return ref.requirement.var
    if isinstance(ref, KbConstraintRef):
        return ref.cid
    raise ValueError("product pins are not diagnosable")


@dataclass
class CheckStats:
    """Effort counters, recorded per top-level call."""

    consistency_checks: int = 0
    solutions_enumerated: int = 0


@dataclass(frozen=True, eq=False)
class Scenario:
    """A complete user-variable assignment together with the chosen product."""

    assignment: dict[str, Value]
    product: Product

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.assignment == other.assignment and self.product == other.product


class _Unsatisfiable(Exception):
    """Internal: the refs alone contradict each other (no search needed)."""


def is_consistent(
    kb: KnowledgeBase,
    active: Iterable[ConstraintRef] = (),
    excluded_kb: Iterable[str] = (),
    stats: CheckStats | None = None,
) -> bool:
    """True iff some Scenario satisfies the active refs and the KB constraints.

    KB constraints in `excluded_kb` are switched off unless re-activated by a
    KbConstraintRef among `active`.
    """
    if stats is not None:
        stats.consistency_checks += 1
    try:
        required, pin, constraints = _resolve(kb, active, excluded_kb)
    except _Unsatisfiable:
        return False
    return next(_scenarios(kb, required, pin, constraints), None) is not None


def checker(
    kb: KnowledgeBase,
    excluded_kb: Iterable[str] = (),
    stats: CheckStats | None = None,
) -> Check:
    """Consistency oracle closure for the diagnosis algorithms."""
    frozen_excluded = frozenset(excluded_kb)

    def check(active: Iterable[ConstraintRef]) -> bool:
        return is_consistent(kb, active, frozen_excluded, stats)

    return check


def consideration_set(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    stats: CheckStats | None = None,
) -> list[str]:
    """Names of the products consistent with the requirements, in table order."""
    kb.validate_requirements(requirements)
    refs = requirement_refs(requirements)
    return [
        p.name
        for p in kb.products
        if is_consistent(kb, refs + (ProductPinRef(p.name),), stats=stats)
    ]


def iter_solutions(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    pin: str | None = None,
) -> Iterator[Scenario]:
    """Lazily yield satisfying scenarios, in deterministic search order."""
    kb.validate_requirements(requirements)
    if pin is not None:
        kb.product(pin)
    required = {r.var: r.value for r in requirements}
    return _scenarios(kb, required, pin, kb.kb_constraints)


def enumerate_solutions(
    kb: KnowledgeBase,
    requirements: Sequence[Requirement],
    limit: int,
    pin: str | None = None,
    stats: CheckStats | None = None,
) -> list[Scenario]:
    """Up to `limit` satisfying scenarios, in deterministic search order."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    found = list(islice(iter_solutions(kb, requirements, pin), limit))
    if stats is not None:
        stats.solutions_enumerated += len(found)
    return found


# -- resolution ---------------------------------------------------------------


def _resolve(
    kb: KnowledgeBase, active: Iterable[ConstraintRef], excluded_kb: Iterable[str]
) -> tuple[dict[str, Value], str | None, tuple[ConstraintExpr, ...]]:
    required: dict[str, Value] = {}
    pin: str | None = None
    included: set[str] = set()

    for ref in active:
        if isinstance(ref, RequirementRef):
            r = ref.requirement
            kb.check_assignment(r.var, r.value)
            if required.setdefault(r.var, r.value) != r.value:
                raise _Unsatisfiable
        elif isinstance(ref, KbConstraintRef):
            kb.constraint(ref.cid)
            included.add(ref.cid)
        elif isinstance(ref, ProductPinRef):
            kb.product(ref.product)
            if pin is not None and pin != ref.product:
                raise _Unsatisfiable
            pin = ref.product
        else:
            raise TypeError(f"not a ConstraintRef: {ref!r}")

    excluded = frozenset(excluded_kb)
    for cid in excluded:
        kb.constraint(cid)

    constraints = tuple(
        c for c in kb.kb_constraints if c.cid not in excluded or c.cid in included
    )
    return required, pin, constraints


# -- search -------------------------------------------------------------------


def _scenarios(
    kb: KnowledgeBase,
    required: dict[str, Value],
    pin: str | None,
    constraints: Sequence[ConstraintExpr],
) -> Iterator[Scenario]:
    products = (kb.product(pin),) if pin is not None else kb.products
    grid = _grid_constants(kb, required, constraints)
    assignment: dict[str, Value] = {}
    for product in products:
        yield from _extend(kb.user_vars, 0, assignment, product, required, constraints, grid)


def _extend(
    variables: tuple[UserVariable, ...],
    index: int,
    assignment: dict[str, Value],
    product: Product,
    required: dict[str, Value],
    constraints: Sequence[ConstraintExpr],
    grid: frozenset[int],
) -> Iterator[Scenario]:
    for c in constraints:
        if _evaluate(c, assignment, product) is False:
            return
    if index == len(variables):
        yield Scenario(dict(assignment), product)
        return
    var = variables[index]
    for value in _candidates(var, required, grid):
        assignment[var.name] = value
        yield from _extend(
            variables, index + 1, assignment, product, required, constraints, grid
        )
        del assignment[var.name]


def _candidates(
    var: UserVariable, required: dict[str, Value], grid: frozenset[int]
) -> tuple[Value, ...]:
    if var.name in required:
        value = required[var.name]
        return (value,) if var.domain.contains(value) else ()
    domain = var.domain
    if isinstance(domain, EnumeratedDomain):
        return domain.values
    if domain.size <= ENUMERATION_LIMIT:
        return tuple(range(domain.lo, domain.hi + 1))
    points = {p for p in grid if domain.lo <= p <= domain.hi}
    points.update((domain.lo, domain.hi))
    return tuple(sorted(points))


def _grid_constants(
    kb: KnowledgeBase,
    required: dict[str, Value],
    constraints: Sequence[ConstraintExpr],
) -> frozenset[int]:
    """Integer probe points that decide every relation a wide range can face."""
    anchors: set[int] = set()

    def add(value: Value) -> None:
        if isinstance(value, int) and not isinstance(value, bool):
            anchors.add(value)

    for value in required.values():
        add(value)
    for c in constraints:
        if isinstance(c, Incompatibility):
            for atom in c.atoms:
                add(atom.value)
        else:
            for atom in c.guard:
                add(atom.value)
            for operand in (c.left, c.right):
                if isinstance(operand, Literal):
                    add(operand.value)
    for product in kb.products:
        for value in product.values.values():
            add(value)
    for v in kb.user_vars:
        if isinstance(v.domain, IntegerRangeDomain):
            anchors.update((v.domain.lo, v.domain.hi))

    return frozenset(
        p for anchor in anchors for p in (anchor - 1, anchor, anchor + 1)
    )


# -- constraint evaluation ----------------------------------------------------


def _evaluate(
    c: ConstraintExpr, assignment: dict[str, Value], product: Product
) -> bool | None:
    """Three-state evaluation: True holds, False violated, None undecided."""
    if isinstance(c, Incompatibility):
        return _evaluate_incompatibility(c, assignment)
    return _evaluate_filter(c, assignment, product)


def _evaluate_incompatibility(
    c: Incompatibility, assignment: dict[str, Value]
) -> bool | None:
    undecided = False
    for atom in c.atoms:
        if atom.var not in assignment:
            undecided = True
        elif assignment[atom.var] != atom.value:
            return True
    return None if undecided else False


def _evaluate_filter(
    c: FilterConstraint, assignment: dict[str, Value], product: Product
) -> bool | None:
    guard_complete = True
    for atom in c.guard:
        if atom.var not in assignment:
            guard_complete = False
        elif assignment[atom.var] != atom.value:
            return True
    left = _operand_value(c.left, assignment, product)
    right = _operand_value(c.right, assignment, product)
    if left is None or right is None:
        return None
    if _compare(c.op, left, right):
        return True
    return False if guard_complete else None


def _operand_value(
    operand: Operand, assignment: dict[str, Value], product: Product
) -> Value | None:
    if isinstance(operand, VarRef):
        return assignment.get(operand.name)
    if isinstance(operand, PropRef):
        return product.values[operand.name]
    return operand.value


def _compare(op: str, left: Value, right: Value) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<=":
        return left <= right
    if op == ">=":
        return left >= right
    if op == "<":
        return left < right
    return left > right
