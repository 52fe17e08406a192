"""Constraint-based product recommendation with explanation and repair.

A knowledge base written in a small plaintext format (questions, a product
table, constraints, regression tests) is compiled to a finite-domain
constraint problem. On top of one consistency oracle the package answers
recommendation queries, explains why requirements admit no product (minimal
conflicts, minimal diagnoses), proposes concrete repairs with support
values, and debugs the knowledge base itself against its test suite.
HTTP and command-line facades expose the same JSON surface.
"""

from .conflict import ConflictSet, quickxplain
from .csp import (
    CheckStats,
    ConstraintRef,
    InconsistentBackgroundError,
    KbConstraintRef,
    ProductPinRef,
    RequirementRef,
    Scenario,
    checker,
    consideration_set,
    enumerate_solutions,
    is_consistent,
    iter_solutions,
    requirement_refs,
)
from .dsl import ParseError, parse, render_constraint, serialize
from .fastdiag import NoDiagnosisError, fastdiag, keep_filter, leading_diagnoses
from .fixtures import bundled_pc_kb, bundled_pc_source, random_instance
from .hsdag import DiagnosisEnumeration, all_minimal_conflicts, all_minimal_diagnoses
from .kbtest import (
    ORDERING_COMPLEXITY,
    ORDERING_DEFINITION,
    ORDERING_REVERSE,
    ORDERINGS,
    KbDiagnosisResult,
    TestResult,
    constraint_order,
    diagnose_kb,
    remove_constraints,
    run_tests,
)
from .model import (
    Atom,
    Diagnosis,
    EnumeratedDomain,
    FilterConstraint,
    Incompatibility,
    IntegerRangeDomain,
    KnowledgeBase,
    Literal,
    ModelError,
    Product,
    ProductProperty,
    PropRef,
    Repair,
    Requirement,
    TestCase,
    UnrepairableError,
    UserVariable,
    VarRef,
    requirements_from_pairs,
)
from .repair import (
    DEFAULT_MAX_ALTERNATIVES,
    DEFAULT_N_DIAGNOSES,
    STATUS_REPAIRS,
    STATUS_SOLUTIONS,
    STATUS_UNREPAIRABLE,
    RecommendationResult,
    RepairGroup,
    diagnose_for_item,
    recommend,
    recommend_for_item,
    repairs_for,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CheckStats",
    "ConflictSet",
    "ConstraintRef",
    "DEFAULT_MAX_ALTERNATIVES",
    "DEFAULT_N_DIAGNOSES",
    "Diagnosis",
    "DiagnosisEnumeration",
    "EnumeratedDomain",
    "FilterConstraint",
    "Incompatibility",
    "InconsistentBackgroundError",
    "IntegerRangeDomain",
    "KbConstraintRef",
    "KbDiagnosisResult",
    "KnowledgeBase",
    "Literal",
    "ModelError",
    "NoDiagnosisError",
    "ORDERINGS",
    "ORDERING_COMPLEXITY",
    "ORDERING_DEFINITION",
    "ORDERING_REVERSE",
    "ParseError",
    "Product",
    "ProductPinRef",
    "ProductProperty",
    "PropRef",
    "RecommendationResult",
    "Repair",
    "RepairGroup",
    "Requirement",
    "RequirementRef",
    "STATUS_REPAIRS",
    "STATUS_SOLUTIONS",
    "STATUS_UNREPAIRABLE",
    "Scenario",
    "TestCase",
    "TestResult",
    "UnrepairableError",
    "UserVariable",
    "VarRef",
    "all_minimal_conflicts",
    "all_minimal_diagnoses",
    "bundled_pc_kb",
    "bundled_pc_source",
    "checker",
    "consideration_set",
    "constraint_order",
    "diagnose_for_item",
    "diagnose_kb",
    "enumerate_solutions",
    "fastdiag",
    "is_consistent",
    "iter_solutions",
    "keep_filter",
    "leading_diagnoses",
    "parse",
    "quickxplain",
    "random_instance",
    "recommend",
    "recommend_for_item",
    "remove_constraints",
    "render_constraint",
    "requirement_refs",
    "requirements_from_pairs",
    "repairs_for",
    "run_tests",
    "serialize",
    "__version__",
]
