"""Regression tests over the knowledge base, and debugging it when they fail.

A test case is a partial assignment that domain experts expect to be
satisfiable. When some tests fail, the faulty constraints are found by
diagnosing the knowledge-base constraints themselves: find a minimal set
whose removal lets every test pass. The consistency oracle for that search
runs all tests against a candidate constraint subset (everything excluded,
candidates switched back on).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .csp import (
    CheckStats,
    ConstraintRef,
    KbConstraintRef,
    RequirementRef,
    is_consistent,
)
from .fastdiag import leading_diagnoses
from .repair import DEFAULT_N_DIAGNOSES
from .model import (
    KIND_KNOWLEDGE_BASE,
    Diagnosis,
    FilterConstraint,
    KnowledgeBase,
    Requirement,
    TestCase,
    UnrepairableError,
)

ORDERING_DEFINITION = "definition_order"
ORDERING_REVERSE = "reverse_definition_order"
ORDERING_COMPLEXITY = "complexity"
ORDERINGS = (ORDERING_DEFINITION, ORDERING_REVERSE, ORDERING_COMPLEXITY)

STATUS_PASS = "pass"
STATUS_FAIL = "fail"


@dataclass(frozen=True)
class TestResult:
    name: str
    passed: bool
    show: bool

    @property
    def status(self) -> str:
        return STATUS_PASS if self.passed else STATUS_FAIL


@dataclass(frozen=True)
class KbDiagnosisResult:
    diagnoses: tuple[Diagnosis, ...]
    all_pass: bool


def _test_requirements(test: TestCase) -> list[Requirement]:
    return [
        Requirement(atom.var, atom.value, rank)
        for rank, atom in enumerate(test.atoms, start=1)
    ]


def run_tests(kb: KnowledgeBase, stats: CheckStats | None = None) -> list[TestResult]:
    """Run every test case against the full knowledge base, in order."""
    results = []
    for test in kb.tests:
        refs = tuple(RequirementRef(r) for r in _test_requirements(test))
        passed = is_consistent(kb, refs, stats=stats)
        results.append(TestResult(name=test.name, passed=passed, show=test.show))
    return results


def _complexity(kb: KnowledgeBase, cid: str) -> int:
    c = kb.constraint(cid)
    if isinstance(c, FilterConstraint):
        return len(c.guard) + 1
    return len(c.atoms)


def constraint_order(kb: KnowledgeBase, ordering: str) -> tuple[KbConstraintRef, ...]:
    """Knowledge-base constraints as refs, most-important-first.

    Importance decides what the diagnosis keeps: definition order trusts
    earlier constraints, reverse trusts later ones, complexity trusts
    simpler ones (so more complex constraints are blamed first), with
    definition order breaking ties.
    """
    ranked = sorted(kb.kb_constraints, key=lambda c: c.definition_rank)
    if ordering == ORDERING_DEFINITION:
        ordered = ranked
    elif ordering == ORDERING_REVERSE:
        ordered = list(reversed(ranked))
    elif ordering == ORDERING_COMPLEXITY:
        ordered = sorted(ranked, key=lambda c: (_complexity(kb, c.cid), c.definition_rank))
    else:
        raise ValueError(f"unknown ordering: {ordering!r}")
    return tuple(KbConstraintRef(c.cid) for c in ordered)


def diagnose_kb(
    kb: KnowledgeBase,
    ordering: str = ORDERING_DEFINITION,
    n: int = DEFAULT_N_DIAGNOSES,
    stats: CheckStats | None = None,
) -> KbDiagnosisResult:
    """Minimal constraint sets to remove so that every test passes.

    Returns no diagnoses with all_pass=True when the tests already pass.
    Raises UnrepairableError when some test is unsatisfiable even with every
    constraint removed (the fault cannot lie in the constraints).
    """
    results = run_tests(kb, stats=stats)
    if all(r.passed for r in results):
        return KbDiagnosisResult(diagnoses=(), all_pass=True)

    all_cids = kb.constraint_ids
    test_refs = [
        tuple(RequirementRef(r) for r in _test_requirements(test))
        for test in kb.tests
    ]
    for test, refs in zip(kb.tests, test_refs):
        if not is_consistent(kb, refs, excluded_kb=all_cids, stats=stats):
            raise UnrepairableError(
                f"test {test.name} fails even with every constraint removed"
            )

    def check(active: Iterable[ConstraintRef]) -> bool:
        kept = tuple(ref for ref in active)
        return all(
            is_consistent(kb, refs + kept, excluded_kb=all_cids, stats=stats)
            for refs in test_refs
        )

    candidates = constraint_order(kb, ordering)
    diagnoses = leading_diagnoses(check, candidates, (), n=n, kind=KIND_KNOWLEDGE_BASE)
    return KbDiagnosisResult(diagnoses=tuple(diagnoses), all_pass=False)


def remove_constraints(kb: KnowledgeBase, cids: Iterable[str]) -> KnowledgeBase:
    """A copy of the knowledge base without the given constraints.

    The remaining constraints are renumbered consecutively, preserving their
    relative order.
    """
    doomed = set(cids)
    for cid in doomed:
        kb.constraint(cid)
    survivors = [c for c in kb.kb_constraints if c.cid not in doomed]
    comp = []
    filt = []
    for rank, c in enumerate(survivors, start=1):
        c = replace(c, cid=f"c{rank}", definition_rank=rank)
        if isinstance(c, FilterConstraint):
            filt.append(c)
        else:
            comp.append(c)
    return KnowledgeBase(
        user_vars=kb.user_vars,
        product_props=kb.product_props,
        products=kb.products,
        comp=tuple(comp),
        filt=tuple(filt),
        tests=kb.tests,
    )
