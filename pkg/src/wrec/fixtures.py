"""Bundled example knowledge base and random instances for property tests.

`bundled_pc_kb` parses the `pc.wrec` file shipped inside the package: a
small personal-computer assortment whose diagnosis behavior is pinned down
by the acceptance suite. `random_instance` generates valid (knowledge base,
requirements) pairs deterministically from a seed, sized so that a
brute-force oracle can enumerate every scenario.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from . import dsl
from .model import (
    Atom,
    EnumeratedDomain,
    FilterConstraint,
    Incompatibility,
    IntegerRangeDomain,
    KnowledgeBase,
    Literal,
    Operand,
    Product,
    ProductProperty,
    PropRef,
    Requirement,
    UserVariable,
    VarRef,
    infer_property_domain,
)

BUNDLED_KB_NAME = "pc"

_VALUE_POOL = ("alpha", "beta", "gamma", "delta", "omega", "sigma")


def bundled_pc_source() -> str:
    """The source text of the packaged pc.wrec knowledge base."""
    return (
        resources.files("wrec").joinpath("data/pc.wrec").read_text(encoding="utf-8")
    )


def bundled_pc_kb() -> KnowledgeBase:
    """The packaged personal-computer knowledge base, parsed."""
    return dsl.parse(bundled_pc_source())


@dataclass(frozen=True)
class Instance:
    """One generated test case: a knowledge base plus entered requirements."""

    kb: KnowledgeBase
    requirements: tuple[Requirement, ...]


def random_instance(seed: int, allow_wide: bool = False) -> Instance:
    """A valid random (kb, requirements) pair, deterministic in `seed`.

    Sizes stay small: at most 5 user variables with at most 4 values each
    (integer ranges at most 7 wide), 4 products, 3 properties and 6
    constraints, so exhaustive scenario enumeration stays cheap. Roughly
    half of all pairs are inconsistent. With `allow_wide`, one integer
    variable gets a range too wide to enumerate, to exercise the solver's
    boundary-grid path.
    """
    rng = random.Random(seed)

    n_vars = rng.choice((1, 2, 2, 3, 3, 4, 4, 5))
    wide_index = rng.randrange(n_vars) if allow_wide else -1
    user_vars = []
    for i in range(n_vars):
        name = f"q{i + 1}"
        keep = rng.random() < 0.2
        if i == wide_index:
            lo = rng.randint(0, 50)
            domain = IntegerRangeDomain(lo, lo + rng.randint(65, 200))
        elif rng.random() < 0.35:
            lo = rng.randint(0, 20)
            domain = IntegerRangeDomain(lo, lo + rng.randint(1, 6))
        else:
            values = rng.sample(_VALUE_POOL, rng.randint(2, 4))
            domain = EnumeratedDomain(tuple(values))
        user_vars.append(UserVariable(name=name, domain=domain, keep=keep))

    n_props = rng.randint(1, 3)
    prop_is_int = [rng.random() < 0.4 for _ in range(n_props)]
    n_products = rng.randint(1, 4)
    columns: list[list] = []
    for j in range(n_props):
        if prop_is_int[j]:
            columns.append([rng.randint(0, 25) for _ in range(n_products)])
        else:
            columns.append(
                [rng.choice(_VALUE_POOL) for _ in range(n_products)]
            )
    product_props = tuple(
        ProductProperty(name=f"p{j + 1}_p", domain=infer_property_domain(columns[j]))
        for j in range(n_props)
    )
    products = tuple(
        Product(
            name=f"item{i + 1}",
            values={f"p{j + 1}_p": columns[j][i] for j in range(n_props)},
        )
        for i in range(n_products)
    )

    int_operands: list[Operand] = [
        VarRef(v.name) for v in user_vars if isinstance(v.domain, IntegerRangeDomain)
    ] + [PropRef(p.name) for j, p in enumerate(product_props) if prop_is_int[j]]
    enum_operands: list[Operand] = [
        VarRef(v.name) for v in user_vars if isinstance(v.domain, EnumeratedDomain)
    ] + [PropRef(p.name) for j, p in enumerate(product_props) if not prop_is_int[j]]

    def domain_value(var: UserVariable):
        if isinstance(var.domain, IntegerRangeDomain):
            return rng.randint(var.domain.lo, var.domain.hi)
        return rng.choice(var.domain.values)

    def random_atoms(max_atoms: int) -> tuple[Atom, ...]:
        count = rng.randint(1, min(max_atoms, len(user_vars)))
        chosen = rng.sample(user_vars, count)
        return tuple(Atom(v.name, domain_value(v)) for v in chosen)

    int_prop_names = {
        p.name for j, p in enumerate(product_props) if prop_is_int[j]
    }

    def literal_for(ref: Operand) -> Literal:
        if isinstance(ref, VarRef):
            var = next(v for v in user_vars if v.name == ref.name)
            return Literal(domain_value(var))
        if ref.name in int_prop_names:
            return Literal(rng.randint(0, 25))
        return Literal(rng.choice(_VALUE_POOL))

    comp = []
    filt = []
    rank = 0
    for _ in range(rng.randint(1, 6)):
        want_filter = rng.random() < 0.5 and (int_operands or enum_operands)
        if not want_filter:
            rank += 1
            comp.append(
                Incompatibility(
                    cid=f"c{rank}", atoms=random_atoms(2), definition_rank=rank
                )
            )
            continue
        op = rng.choice(("=", "!=", "<=", ">=", "<", ">"))
        if op in ("=", "!="):
            pool = rng.choice([p for p in (int_operands, enum_operands) if p])
        else:
            pool = int_operands
        if not pool:
            rank += 1
            comp.append(
                Incompatibility(
                    cid=f"c{rank}", atoms=random_atoms(2), definition_rank=rank
                )
            )
            continue
        left = rng.choice(pool)
        if rng.random() < 0.4:
            right: Operand = literal_for(left)
        else:
            right = rng.choice(pool)
        if rng.random() < 0.5:
            left, right = right, left
        if isinstance(left, Literal) and isinstance(right, Literal):
            right = rng.choice(pool)
        guard = random_atoms(2) if rng.random() < 0.55 else ()
        rank += 1
        filt.append(
            FilterConstraint(
                cid=f"c{rank}",
                guard=guard,
                left=left,
                op=op,
                right=right,
                definition_rank=rank,
            )
        )

    kb = KnowledgeBase(
        user_vars=tuple(user_vars),
        product_props=product_props,
        products=products,
        comp=tuple(comp),
        filt=tuple(filt),
    )

    # requirement values lean toward values named in constraint atoms, so
    # that about half of all generated pairs come out inconsistent
    atom_values: dict[str, list] = {}
    for c in comp:
        for atom in c.atoms:
            atom_values.setdefault(atom.var, []).append(atom.value)
    for f in filt:
        for atom in f.guard:
            atom_values.setdefault(atom.var, []).append(atom.value)

    def requirement_value(var: UserVariable):
        if var.name in atom_values and rng.random() < 0.5:
            return rng.choice(atom_values[var.name])
        return domain_value(var)

    if rng.random() > 0.2:
        n_reqs = rng.randint(min(1, n_vars), n_vars)
    else:
        n_reqs = rng.randint(0, n_vars)
    chosen_vars = rng.sample(user_vars, n_reqs)
    requirements = tuple(
        Requirement(var=v.name, value=requirement_value(v), entry_rank=i + 1)
        for i, v in enumerate(chosen_vars)
    )
    return Instance(kb=kb, requirements=requirements)


def random_requirements(
    rng: random.Random, kb: KnowledgeBase, max_count: int | None = None
) -> tuple[Requirement, ...]:
    """Extra requirement sets for an existing generated knowledge base."""
    cap = len(kb.user_vars) if max_count is None else min(max_count, len(kb.user_vars))
    chosen = rng.sample(list(kb.user_vars), rng.randint(0, cap))
    out = []
    for i, var in enumerate(chosen):
        if isinstance(var.domain, IntegerRangeDomain):
            value = rng.randint(var.domain.lo, var.domain.hi)
        else:
            value = rng.choice(var.domain.values)
        out.append(Requirement(var=var.name, value=value, entry_rank=i + 1))
    return tuple(out)


__all__ = [
    "BUNDLED_KB_NAME",
    "Instance",
    "bundled_pc_kb",
    "bundled_pc_source",
    "random_instance",
    "random_requirements",
]
