"""Core domain types shared by the whole engine.

Symbolic domain values are plain strings, numeric ones are ints. Every type
is immutable and validated on construction, so downstream code never has to
re-check structural invariants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

Value = str | int

PROPERTY_SUFFIX = "_p"

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

COMPARISONS = ("=", "!=", "<=", ">=", "<", ">")
ORDERING_COMPARISONS = ("<=", ">=", "<", ">")

KIND_REQUIREMENTS = "requirements"
KIND_KNOWLEDGE_BASE = "knowledge-base"


class ModelError(ValueError):
    """A value violates a structural invariant."""


class UnrepairableError(ValueError):
    """No removable subset of the diagnosable constraints can restore consistency."""


def _is_int(value: object) -> bool:
    # bool is an int subclass but never a legal domain value
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class EnumeratedDomain:
    """Ordered finite set of symbolic values."""

    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ModelError("enumerated domain needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ModelError(f"duplicate domain value in {list(self.values)}")
        for v in self.values:
            if not isinstance(v, str) or not IDENTIFIER_RE.fullmatch(v):
                raise ModelError(f"enumerated domain value {v!r} is not an identifier")

    def contains(self, value: Value) -> bool:
        return isinstance(value, str) and value in self.values

    def iter_values(self) -> Iterator[Value]:
        return iter(self.values)

    @property
    def size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class IntegerRangeDomain:
    """Inclusive integer interval lo..hi."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not _is_int(self.lo) or not _is_int(self.hi):
            raise ModelError("integer range bounds must be ints")
        if self.lo > self.hi:
            raise ModelError(f"empty integer range {self.lo}..{self.hi}")

    def contains(self, value: Value) -> bool:
        return _is_int(value) and self.lo <= value <= self.hi

    def iter_values(self) -> Iterator[Value]:
        return iter(range(self.lo, self.hi + 1))

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1


Domain = EnumeratedDomain | IntegerRangeDomain


def infer_property_domain(values: Sequence[Value]) -> Domain:
    """Domain of a product property, inferred from its column in the table.

    An all-integer column becomes the range over observed min..max; otherwise
    values must all be symbolic and the domain enumerates them in first
    appearance order. Mixed columns are rejected.
    """
    if not values:
        raise ModelError("cannot infer a domain from an empty column")
    if all(_is_int(v) for v in values):
        ints = [v for v in values if isinstance(v, int)]
        return IntegerRangeDomain(min(ints), max(ints))
    if any(_is_int(v) for v in values):
        raise ModelError(f"mixed numeric and symbolic values in column {list(values)}")
    seen: list[str] = []
    for v in values:
        if not isinstance(v, str):
            raise ModelError(f"unsupported property value {v!r}")
        if v not in seen:
            seen.append(v)
    return EnumeratedDomain(tuple(seen))


@dataclass(frozen=True)
class UserVariable:
    """A question the user can answer; `keep` excludes it from diagnoses."""

    name: str
    domain: Domain
    keep: bool = False

    def __post_init__(self) -> None:
        _check_identifier(self.name, "user variable")
        if self.name.endswith(PROPERTY_SUFFIX):
            raise ModelError(
                f"user variable {self.name!r} must not end with {PROPERTY_SUFFIX!r}"
                " (suffix reserved for product properties)"
            )


@dataclass(frozen=True)
class ProductProperty:
    name: str
    domain: Domain

    def __post_init__(self) -> None:
        _check_identifier(self.name, "product property")
        if not self.name.endswith(PROPERTY_SUFFIX):
            raise ModelError(f"product property {self.name!r} must end with {PROPERTY_SUFFIX!r}")


@dataclass(frozen=True, eq=False)
class Product:
    """One item row; values keyed by product property name."""

    name: str
    values: Mapping[str, Value]

    def __post_init__(self) -> None:
        _check_identifier(self.name, "product")
        object.__setattr__(self, "values", dict(self.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Product):
            return NotImplemented
        return self.name == other.name and dict(self.values) == dict(other.values)


@dataclass(frozen=True)
class Requirement:
    """Unary user constraint var = value; entry_rank 1 means entered first."""

    var: str
    value: Value
    entry_rank: int

    def __post_init__(self) -> None:
        _check_identifier(self.var, "requirement variable")
        if not _is_int(self.entry_rank) or self.entry_rank < 1:
            raise ModelError(f"entry_rank must be a positive integer, got {self.entry_rank!r}")


@dataclass(frozen=True)
class Atom:
    """var = value over a user variable."""

    var: str
    value: Value


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class PropRef:
    name: str


@dataclass(frozen=True)
class Literal:
    value: Value

    def __post_init__(self) -> None:
        ok = _is_int(self.value) or (
            isinstance(self.value, str) and IDENTIFIER_RE.fullmatch(self.value)
        )
        if not ok:
            raise ModelError(f"literal {self.value!r} must be an int or an identifier")


Operand = VarRef | PropRef | Literal


@dataclass(frozen=True)
class Incompatibility:
    """Forbidden combination: not (a1 and a2 and ...)."""

    cid: str
    atoms: tuple[Atom, ...]
    definition_rank: int

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ModelError(f"incompatibility {self.cid} needs at least one atom")


@dataclass(frozen=True)
class FilterConstraint:
    """Relation `left op right`, optionally guarded: guard atoms imply the relation."""

    cid: str
    guard: tuple[Atom, ...]
    left: Operand
    op: str
    right: Operand
    definition_rank: int

    def __post_init__(self) -> None:
        if self.op not in COMPARISONS:
            raise ModelError(f"unknown comparison operator {self.op!r}")
        if not any(isinstance(o, (VarRef, PropRef)) for o in (self.left, self.right)):
            raise ModelError(
                f"filter {self.cid} must reference a user variable or product property"
            )


ConstraintExpr = Incompatibility | FilterConstraint


@dataclass(frozen=True)
class TestCase:
    """Positive regression test: the conjunction must stay consistent with the KB."""

    name: str
    atoms: tuple[Atom, ...]
    show: bool = False

    def __post_init__(self) -> None:
        _check_identifier(self.name, "test case")
        if not self.atoms:
            raise ModelError(f"test case {self.name} needs at least one atom")


@dataclass(frozen=True)
class Diagnosis:
    """Minimal removable subset, identified by requirement vars or constraint ids."""

    elements: frozenset[str]
    kind: str = KIND_REQUIREMENTS

    def __post_init__(self) -> None:
        if self.kind not in (KIND_REQUIREMENTS, KIND_KNOWLEDGE_BASE):
            raise ModelError(f"unknown diagnosis kind {self.kind!r}")
        object.__setattr__(self, "elements", frozenset(self.elements))

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    @property
    def empty(self) -> bool:
        return not self.elements


@dataclass(frozen=True, eq=False)
class Repair:
    """A diagnosis with one concrete adaptation, its items, and its support."""

    diagnosis: Diagnosis
    adaptation: Mapping[str, Value]
    items: tuple[str, ...]
    support: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "adaptation", dict(self.adaptation))
        if set(self.adaptation) != set(self.diagnosis.elements):
            raise ModelError("adaptation must cover exactly the diagnosed variables")
        if not self.items:
            raise ModelError("a repair must list at least one item")
        if not (0 <= self.support <= 1):
            raise ModelError(f"support must lie in [0, 1], got {self.support}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Repair):
            return NotImplemented
        return (
            self.diagnosis == other.diagnosis
            and dict(self.adaptation) == dict(other.adaptation)
            and self.items == other.items
            and self.support == other.support
        )


@dataclass(frozen=True, eq=False)
class KnowledgeBase:
    """U, P, the product table, COMP and FILT constraints, and the test suite."""

    user_vars: tuple[UserVariable, ...]
    product_props: tuple[ProductProperty, ...]
    products: tuple[Product, ...]
    comp: tuple[Incompatibility, ...]
    filt: tuple[FilterConstraint, ...]
    tests: tuple[TestCase, ...] = ()

    _vars_by_name: dict = field(init=False, repr=False, compare=False)
    _props_by_name: dict = field(init=False, repr=False, compare=False)
    _products_by_name: dict = field(init=False, repr=False, compare=False)
    _constraints_by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_vars_by_name", {v.name: v for v in self.user_vars})
        object.__setattr__(self, "_props_by_name", {p.name: p for p in self.product_props})
        object.__setattr__(self, "_products_by_name", {p.name: p for p in self.products})
        object.__setattr__(
            self, "_constraints_by_id", {c.cid: c for c in self.comp + self.filt}
        )
        self._validate()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return all(
            getattr(self, f.name) == getattr(other, f.name)
            for f in fields(self)
            if f.compare
        )

    # -- lookups ---------------------------------------------------------

    def user_var(self, name: str) -> UserVariable:
        try:
            return self._vars_by_name[name]
        except KeyError:
            raise ModelError(f"unknown user variable {name!r}") from None

    def has_user_var(self, name: str) -> bool:
        return name in self._vars_by_name

    def prop(self, name: str) -> ProductProperty:
        try:
            return self._props_by_name[name]
        except KeyError:
            raise ModelError(f"unknown product property {name!r}") from None

    def has_prop(self, name: str) -> bool:
        return name in self._props_by_name

    def product(self, name: str) -> Product:
        try:
            return self._products_by_name[name]
        except KeyError:
            raise ModelError(f"unknown product {name!r}") from None

    def has_product(self, name: str) -> bool:
        return name in self._products_by_name

    def constraint(self, cid: str) -> ConstraintExpr:
        try:
            return self._constraints_by_id[cid]
        except KeyError:
            raise ModelError(f"unknown constraint id {cid!r}") from None

    @property
    def kb_constraints(self) -> tuple[ConstraintExpr, ...]:
        """COMP and FILT merged, in definition order."""
        return tuple(sorted(self.comp + self.filt, key=lambda c: c.definition_rank))

    @property
    def constraint_ids(self) -> frozenset[str]:
        return frozenset(self._constraints_by_id)

    # -- requirement validation -------------------------------------------

    def check_assignment(self, var: str, value: Value) -> None:
        """Raise ModelError unless `var = value` is a legal user assignment."""
        uv = self.user_var(var)
        if not uv.domain.contains(value):
            raise ModelError(f"value {value!r} is outside the domain of {var!r}")

    def validate_requirements(self, requirements: Sequence[Requirement]) -> None:
        seen_vars: set[str] = set()
        seen_ranks: set[int] = set()
        for r in requirements:
            self.check_assignment(r.var, r.value)
            if r.var in seen_vars:
                raise ModelError(f"duplicate requirement on variable {r.var!r}")
            if r.entry_rank in seen_ranks:
                raise ModelError(f"duplicate entry_rank {r.entry_rank}")
            seen_vars.add(r.var)
            seen_ranks.add(r.entry_rank)

    # -- construction-time validation --------------------------------------

    def _operand_kind(self, operand: Operand, cid: str) -> str:
        """'int' or 'symbol', raising on unresolved references."""
        if isinstance(operand, VarRef):
            if not self.has_user_var(operand.name):
                raise ModelError(f"constraint {cid} references unknown variable {operand.name!r}")
            domain = self.user_var(operand.name).domain
        elif isinstance(operand, PropRef):
            if not self.has_prop(operand.name):
                raise ModelError(f"constraint {cid} references unknown property {operand.name!r}")
            domain = self.prop(operand.name).domain
        else:
            return "int" if _is_int(operand.value) else "symbol"
        return "int" if isinstance(domain, IntegerRangeDomain) else "symbol"

    def _validate_atom(self, atom: Atom, owner: str) -> None:
        if not self.has_user_var(atom.var):
            raise ModelError(f"{owner} references unknown user variable {atom.var!r}")
        if not self.user_var(atom.var).domain.contains(atom.value):
            raise ModelError(
                f"{owner} uses out-of-domain value {atom.value!r} for {atom.var!r}"
            )

    def _validate_filter(self, c: FilterConstraint) -> None:
        for atom in c.guard:
            self._validate_atom(atom, f"constraint {c.cid}")
        left_kind = self._operand_kind(c.left, c.cid)
        right_kind = self._operand_kind(c.right, c.cid)
        if c.op in ORDERING_COMPARISONS:
            if left_kind != "int" or right_kind != "int":
                raise ModelError(
                    f"constraint {c.cid}: operator {c.op!r} needs integer operands"
                )
        elif left_kind != right_kind:
            raise ModelError(
                f"constraint {c.cid}: cannot compare integer and symbolic operands"
            )
        # an equality literal against a user variable must be in that domain;
        # property domains are inferred from the table, so only type-checked
        for ref, lit in ((c.left, c.right), (c.right, c.left)):
            if c.op in ("=", "!=") and isinstance(ref, VarRef) and isinstance(lit, Literal):
                if not self.user_var(ref.name).domain.contains(lit.value):
                    raise ModelError(
                        f"constraint {c.cid} uses out-of-domain value {lit.value!r}"
                        f" for {ref.name!r}"
                    )

    def _validate(self) -> None:
        names_seen: set[str] = set()
        for v in self.user_vars:
            if v.name in names_seen:
                raise ModelError(f"duplicate variable name {v.name!r}")
            names_seen.add(v.name)
        for p in self.product_props:
            if p.name in names_seen:
                raise ModelError(f"duplicate variable name {p.name!r}")
            names_seen.add(p.name)

        if not self.product_props:
            raise ModelError("at least one product property is required")
        if not self.products:
            raise ModelError("no products declared")
        product_names: set[str] = set()
        declared_props = [p.name for p in self.product_props]
        for prod in self.products:
            if prod.name in product_names:
                raise ModelError(f"duplicate product name {prod.name!r}")
            product_names.add(prod.name)
            if set(prod.values) != set(declared_props):
                raise ModelError(
                    f"product {prod.name!r} must assign exactly the declared properties"
                )
            for prop_name, value in prod.values.items():
                if not self.prop(prop_name).domain.contains(value):
                    raise ModelError(
                        f"product {prod.name!r} value {value!r} is outside"
                        f" the domain of {prop_name!r}"
                    )

        # property domains are descriptive: they must equal what the table implies,
        # which is what makes serialize-then-parse an identity
        for p in self.product_props:
            column = [prod.values[p.name] for prod in self.products]
            if p.domain != infer_property_domain(column):
                raise ModelError(
                    f"domain of {p.name!r} must match the values in the product table"
                )

        # ids derive from ranks (c<rank>) so serialized KBs reparse identically
        ids_seen: set[str] = set()
        ranks: list[int] = []
        for c in self.comp + self.filt:
            if c.cid in ids_seen:
                raise ModelError(f"duplicate constraint id {c.cid!r}")
            if c.cid != f"c{c.definition_rank}":
                raise ModelError(
                    f"constraint id {c.cid!r} must be 'c' followed by its definition rank"
                )
            ids_seen.add(c.cid)
            ranks.append(c.definition_rank)
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise ModelError("constraint definition ranks must form a permutation 1..n")

        for c in self.comp:
            for atom in c.atoms:
                self._validate_atom(atom, f"constraint {c.cid}")
        for c in self.filt:
            self._validate_filter(c)

        test_names: set[str] = set()
        for t in self.tests:
            if t.name in test_names:
                raise ModelError(f"duplicate test name {t.name!r}")
            test_names.add(t.name)
            for atom in t.atoms:
                self._validate_atom(atom, f"test {t.name}")


def requirements_from_pairs(pairs: Sequence[tuple[str, Value]]) -> tuple[Requirement, ...]:
    """Build a requirement tuple where list position defines the entry rank."""
    return tuple(
        Requirement(var=var, value=value, entry_rank=i + 1)
        for i, (var, value) in enumerate(pairs)
    )


def _check_identifier(name: str, what: str) -> None:
    if not isinstance(name, str) or not IDENTIFIER_RE.fullmatch(name):
        raise ModelError(f"{what} name {name!r} is not a valid identifier")
