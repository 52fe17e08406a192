"""Parser and serializer for the plaintext knowledge-base format.

The format is line-oriented. `#` starts a comment, blank lines are ignored,
and four section tags group the content (any section order):

    &QUESTIONS
    usage? [Internet, Office, Scientific]
    maxprice? [0..3000]
    country? [Austria, Germany] keep

    &PRODUCTS cpu_p, price_p
    hw1: CPUS; 1400

    &CONSTRAINTS
    incompatible{usage=Scientific & cpu=CPUD}
    maxprice >= price_p
    usage=Office -> price_p <= 2000

    &TEST
    test t1: usage=Scientific & cpu=CPUD |show|

Product property domains are not written down; they are inferred from the
product table (an all-integer column becomes the observed min..max range,
anything else enumerates the distinct values in first appearance order).
Constraint ids are `c<rank>` over the whole &CONSTRAINTS section, so a
parsed knowledge base always serializes back to an equivalent one.
"""

from __future__ import annotations

import re

from .model import (
    Atom,
    ConstraintExpr,
    Domain,
    EnumeratedDomain,
    FilterConstraint,
    Incompatibility,
    IntegerRangeDomain,
    KnowledgeBase,
    Literal,
    ModelError,
    Operand,
    Product,
    ProductProperty,
    PropRef,
    PROPERTY_SUFFIX,
    TestCase,
    UserVariable,
    Value,
    VarRef,
    infer_property_domain,
)

KIND_SYNTAX = "syntax"
KIND_REFERENCE = "reference"
KIND_DOMAIN = "domain-violation"

_SECTION_TAGS = ("&QUESTIONS", "&PRODUCTS", "&CONSTRAINTS", "&TEST")

_IDENT_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_TOKEN = re.compile(r"-?\d+(?![A-Za-z0-9_])")
_INCOMPAT_LINE = re.compile(r"\s*incompatible\s*\{")

# longest first so "<=" wins over "<"
_CMP_TOKENS = ("<=", ">=", "!=", "<", ">", "=")


class ParseError(Exception):
    """Parse failure with a position and a coarse failure kind."""

    def __init__(self, line: int, column: int, message: str, kind: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.kind = kind


class _Cursor:
    """Token scanner over one source line, tracking columns for errors."""

    def __init__(self, line_no: int, text: str, pos: int = 0):
        self.no = line_no
        self.text = text
        self.pos = pos

    def fail(self, message: str, kind: str = KIND_SYNTAX, column: int | None = None) -> None:
        raise ParseError(self.no, self.pos + 1 if column is None else column, message, kind)

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self._skip_ws()
        return self.pos >= len(self.text)

    def expect_end(self) -> None:
        if not self.at_end():
            self.fail("unexpected trailing text")

    def try_literal(self, token: str) -> bool:
        self._skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect_literal(self, token: str) -> None:
        if not self.try_literal(token):
            self.fail(f"expected {token!r}")

    def try_keyword(self, word: str) -> bool:
        self._skip_ws()
        end = self.pos + len(word)
        if self.text.startswith(word, self.pos):
            follower = self.text[end : end + 1]
            if not (follower.isalnum() or follower == "_"):
                self.pos = end
                return True
        return False

    def ident(self, what: str) -> tuple[str, int]:
        self._skip_ws()
        m = _IDENT_TOKEN.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group(), m.start() + 1

    def peek_int(self) -> bool:
        self._skip_ws()
        return bool(_INT_TOKEN.match(self.text, self.pos))

    def int_token(self, what: str) -> tuple[int, int]:
        self._skip_ws()
        m = _INT_TOKEN.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return int(m.group()), m.start() + 1

    def value_token(self, what: str) -> tuple[Value, int]:
        if self.peek_int():
            return self.int_token(what)
        return self.ident(what)


class _Section:
    def __init__(self, tag_line: int, tag_text: str, header_pos: int):
        self.tag_line = tag_line
        self.tag_text = tag_text
        self.header_pos = header_pos
        self.lines: list[tuple[int, str]] = []


def parse(text: str) -> KnowledgeBase:
    """Parse DSL text into a KnowledgeBase, raising ParseError on any defect."""
    sections = _split_sections(text)

    user_vars = _parse_questions(sections.get("&QUESTIONS"))
    var_domains = {v.name: v.domain for v in user_vars}

    props, products = _parse_products(sections.get("&PRODUCTS"), var_domains)
    prop_domains = {p.name: p.domain for p in props}

    comp, filt = _parse_constraints(sections.get("&CONSTRAINTS"), var_domains, prop_domains)
    tests = _parse_tests(sections.get("&TEST"), var_domains)

    try:
        return KnowledgeBase(
            user_vars=tuple(user_vars),
            product_props=tuple(props),
            products=tuple(products),
            comp=tuple(comp),
            filt=tuple(filt),
            tests=tuple(tests),
        )
    except ModelError as exc:
        # the checks above should catch everything positionally; this is a net
        raise ParseError(1, 1, str(exc), KIND_REFERENCE) from exc


def _split_sections(text: str) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        if stripped.startswith("&"):
            start = body.index("&")
            tag = stripped.split()[0]
            if tag not in _SECTION_TAGS:
                raise ParseError(no, start + 1, f"unknown section tag {tag!r}", KIND_SYNTAX)
            if tag in sections:
                raise ParseError(no, start + 1, f"duplicate section {tag}", KIND_SYNTAX)
            header_pos = start + len(tag)
            if tag != "&PRODUCTS" and body[header_pos:].strip():
                raise ParseError(no, header_pos + 1, f"unexpected text after {tag}", KIND_SYNTAX)
            section = _Section(no, body, header_pos)
            sections[tag] = section
            current = section
        else:
            if current is None:
                raise ParseError(
                    no, _indent_of(body) + 1, "expected a section tag like &QUESTIONS", KIND_SYNTAX
                )
            current.lines.append((no, body))
    return sections


def _indent_of(body: str) -> int:
    return len(body) - len(body.lstrip())


def _parse_questions(section: _Section | None) -> list[UserVariable]:
    if section is None:
        return []
    if not section.lines:
        raise ParseError(
            section.tag_line, 1, "&QUESTIONS needs at least one question", KIND_SYNTAX
        )
    out: list[UserVariable] = []
    seen: set[str] = set()
    for no, text in section.lines:
        cur = _Cursor(no, text)
        name, name_col = cur.ident("a variable name")
        if name.endswith(PROPERTY_SUFFIX):
            cur.fail(
                f"user variable {name!r} must not end with {PROPERTY_SUFFIX!r}",
                KIND_SYNTAX,
                name_col,
            )
        if name in seen:
            cur.fail(f"duplicate variable name {name!r}", KIND_REFERENCE, name_col)
        seen.add(name)
        cur.expect_literal("?")
        domain = _parse_domain(cur)
        keep = cur.try_keyword("keep")
        cur.expect_end()
        out.append(UserVariable(name=name, domain=domain, keep=keep))
    return out


def _parse_domain(cur: _Cursor) -> Domain:
    cur.expect_literal("[")
    if cur.peek_int():
        lo, lo_col = cur.int_token("a range bound")
        cur.expect_literal("..")
        hi, _ = cur.int_token("a range bound")
        cur.expect_literal("]")
        if lo > hi:
            cur.fail(f"empty integer range {lo}..{hi}", KIND_DOMAIN, lo_col)
        return IntegerRangeDomain(lo, hi)
    values: list[str] = []
    while True:
        value, col = cur.ident("a domain value")
        if value in values:
            cur.fail(f"duplicate domain value {value!r}", KIND_DOMAIN, col)
        values.append(value)
        if not cur.try_literal(","):
            break
    cur.expect_literal("]")
    return EnumeratedDomain(tuple(values))


def _parse_products(
    section: _Section | None, var_domains: dict[str, Domain]
) -> tuple[list[ProductProperty], list[Product]]:
    if section is None:
        raise ParseError(1, 1, "no products declared", KIND_REFERENCE)

    header = _Cursor(section.tag_line, section.tag_text, section.header_pos)
    prop_names: list[str] = []
    while True:
        name, col = header.ident("a product property name")
        if not name.endswith(PROPERTY_SUFFIX):
            header.fail(
                f"product property {name!r} must end with {PROPERTY_SUFFIX!r}",
                KIND_SYNTAX,
                col,
            )
        if name in prop_names:
            header.fail(f"duplicate property name {name!r}", KIND_REFERENCE, col)
        if name in var_domains:
            header.fail(f"{name!r} is already a user variable", KIND_REFERENCE, col)
        prop_names.append(name)
        if not header.try_literal(","):
            break
    header.expect_end()

    if not section.lines:
        raise ParseError(section.tag_line, 1, "&PRODUCTS needs at least one product", KIND_SYNTAX)

    rows: list[tuple[str, list[tuple[Value, int, int]]]] = []
    seen: set[str] = set()
    for no, text in section.lines:
        cur = _Cursor(no, text)
        name, name_col = cur.ident("a product name")
        if name in seen:
            cur.fail(f"duplicate product name {name!r}", KIND_REFERENCE, name_col)
        seen.add(name)
        cur.expect_literal(":")
        values: list[tuple[Value, int, int]] = []
        while True:
            value, col = cur.value_token("a property value")
            values.append((value, no, col))
            if not cur.try_literal(";"):
                break
        cur.expect_end()
        if len(values) != len(prop_names):
            cur.fail(
                f"product {name!r} needs {len(prop_names)} property values, got {len(values)}",
                KIND_SYNTAX,
                name_col,
            )
        rows.append((name, values))

    props: list[ProductProperty] = []
    for i, prop_name in enumerate(prop_names):
        column = [row[1][i][0] for row in rows]
        try:
            domain = infer_property_domain(column)
        except ModelError:
            first_is_int = isinstance(column[0], int)
            for value, no, col in (row[1][i] for row in rows):
                if isinstance(value, int) != first_is_int:
                    raise ParseError(
                        no,
                        col,
                        f"mixed numeric and symbolic values in column {prop_name!r}",
                        KIND_DOMAIN,
                    ) from None
            raise  # pragma: no cover - inference only fails on mixed columns
        props.append(ProductProperty(prop_name, domain))

    products = [
        Product(name, {prop: v for prop, (v, _, _) in zip(prop_names, values)})
        for name, values in rows
    ]
    return props, products


def _parse_atom(cur: _Cursor, var_domains: dict[str, Domain]) -> Atom:
    name, name_col = cur.ident("a variable name")
    if name not in var_domains:
        cur.fail(f"unknown user variable {name!r}", KIND_REFERENCE, name_col)
    cur.expect_literal("=")
    value, value_col = cur.value_token("a value")
    if not var_domains[name].contains(value):
        cur.fail(
            f"value {value!r} is outside the domain of {name!r}", KIND_DOMAIN, value_col
        )
    return Atom(name, value)


def _parse_atom_conjunction(cur: _Cursor, var_domains: dict[str, Domain]) -> tuple[Atom, ...]:
    atoms = [_parse_atom(cur, var_domains)]
    while cur.try_literal("&"):
        atoms.append(_parse_atom(cur, var_domains))
    return tuple(atoms)


def _parse_operand(
    cur: _Cursor, var_domains: dict[str, Domain], prop_domains: dict[str, Domain]
) -> tuple[Operand, int]:
    if cur.peek_int():
        value, col = cur.int_token("an operand")
        return Literal(value), col
    name, col = cur.ident("an operand")
    if name in var_domains:
        return VarRef(name), col
    if name.endswith(PROPERTY_SUFFIX):
        if name not in prop_domains:
            cur.fail(f"unknown product property {name!r}", KIND_REFERENCE, col)
        return PropRef(name), col
    return Literal(name), col


def _operand_kind(
    operand: Operand, var_domains: dict[str, Domain], prop_domains: dict[str, Domain]
) -> str:
    if isinstance(operand, VarRef):
        domain = var_domains[operand.name]
    elif isinstance(operand, PropRef):
        domain = prop_domains[operand.name]
    else:
        return "int" if isinstance(operand.value, int) else "symbol"
    return "int" if isinstance(domain, IntegerRangeDomain) else "symbol"


def _parse_cmp(cur: _Cursor) -> str:
    for token in _CMP_TOKENS:
        if cur.try_literal(token):
            return token
    cur.fail("expected a comparison operator")
    raise AssertionError("unreachable")


def _parse_constraints(
    section: _Section | None,
    var_domains: dict[str, Domain],
    prop_domains: dict[str, Domain],
) -> tuple[list[Incompatibility], list[FilterConstraint]]:
    if section is None:
        return [], []
    if not section.lines:
        raise ParseError(
            section.tag_line, 1, "&CONSTRAINTS needs at least one constraint", KIND_SYNTAX
        )
    comp: list[Incompatibility] = []
    filt: list[FilterConstraint] = []
    for rank, (no, text) in enumerate(section.lines, start=1):
        cid = f"c{rank}"
        if _INCOMPAT_LINE.match(text):
            cur = _Cursor(no, text)
            cur.try_keyword("incompatible")
            cur.expect_literal("{")
            atoms = _parse_atom_conjunction(cur, var_domains)
            cur.expect_literal("}")
            cur.expect_end()
            comp.append(Incompatibility(cid=cid, atoms=atoms, definition_rank=rank))
        else:
            filt.append(
                _parse_filter(no, text, cid, rank, var_domains, prop_domains)
            )
    return comp, filt


def _parse_filter(
    no: int,
    text: str,
    cid: str,
    rank: int,
    var_domains: dict[str, Domain],
    prop_domains: dict[str, Domain],
) -> FilterConstraint:
    guard: tuple[Atom, ...] = ()
    rel_pos = 0
    arrow = text.find("->")
    if arrow >= 0:
        guard_cur = _Cursor(no, text[:arrow])
        guard = _parse_atom_conjunction(guard_cur, var_domains)
        guard_cur.expect_end()
        rel_pos = arrow + 2

    cur = _Cursor(no, text, rel_pos)
    left, left_col = _parse_operand(cur, var_domains, prop_domains)
    op = _parse_cmp(cur)
    right, right_col = _parse_operand(cur, var_domains, prop_domains)
    cur.expect_end()

    if isinstance(left, Literal) and isinstance(right, Literal):
        cur.fail(
            "filter must reference a declared variable or product property",
            KIND_REFERENCE,
            left_col,
        )

    left_kind = _operand_kind(left, var_domains, prop_domains)
    right_kind = _operand_kind(right, var_domains, prop_domains)
    if op in ("<=", ">=", "<", ">"):
        if left_kind != "int":
            cur.fail(f"operator {op!r} needs integer operands", KIND_DOMAIN, left_col)
        if right_kind != "int":
            cur.fail(f"operator {op!r} needs integer operands", KIND_DOMAIN, right_col)
    elif left_kind != right_kind:
        cur.fail("cannot compare integer and symbolic operands", KIND_DOMAIN, right_col)

    for ref, lit, col in ((left, right, right_col), (right, left, left_col)):
        if (
            op in ("=", "!=")
            and isinstance(ref, VarRef)
            and isinstance(lit, Literal)
            and not var_domains[ref.name].contains(lit.value)
        ):
            raise ParseError(
                no,
                col,
                f"value {lit.value!r} is outside the domain of {ref.name!r}",
                KIND_DOMAIN,
            )

    return FilterConstraint(
        cid=cid, guard=guard, left=left, op=op, right=right, definition_rank=rank
    )


def _parse_tests(
    section: _Section | None, var_domains: dict[str, Domain]
) -> list[TestCase]:
    if section is None or not section.lines:
        return []
    out: list[TestCase] = []
    seen: set[str] = set()
    for no, text in section.lines:
        cur = _Cursor(no, text)
        if not cur.try_keyword("test"):
            cur.fail("expected 'test'")
        name, name_col = cur.ident("a test name")
        if name in seen:
            cur.fail(f"duplicate test name {name!r}", KIND_REFERENCE, name_col)
        seen.add(name)
        cur.expect_literal(":")
        atoms = _parse_atom_conjunction(cur, var_domains)
        show = cur.try_literal("|show|")
        cur.expect_end()
        out.append(TestCase(name=name, atoms=atoms, show=show))
    return out


# -- serialization ----------------------------------------------------------


def serialize(kb: KnowledgeBase) -> str:
    """Canonical text form; parse(serialize(kb)) structurally equals kb."""
    blocks: list[list[str]] = []

    if kb.user_vars:
        lines = ["&QUESTIONS"]
        for v in kb.user_vars:
            suffix = " keep" if v.keep else ""
            lines.append(f"{v.name}? {_render_domain(v.domain)}{suffix}")
        blocks.append(lines)

    header = ", ".join(p.name for p in kb.product_props)
    lines = [f"&PRODUCTS {header}"]
    for product in kb.products:
        values = "; ".join(
            render_value(product.values[p.name]) for p in kb.product_props
        )
        lines.append(f"{product.name}: {values}")
    blocks.append(lines)

    constraints = kb.kb_constraints
    if constraints:
        lines = ["&CONSTRAINTS"]
        lines.extend(render_constraint(c) for c in constraints)
        blocks.append(lines)

    if kb.tests:
        lines = ["&TEST"]
        for t in kb.tests:
            atoms = " & ".join(_render_atom(a) for a in t.atoms)
            suffix = " |show|" if t.show else ""
            lines.append(f"test {t.name}: {atoms}{suffix}")
        blocks.append(lines)

    return "\n\n".join("\n".join(block) for block in blocks) + "\n"


def render_value(value: Value) -> str:
    return str(value)


def render_constraint(constraint: ConstraintExpr) -> str:
    """Human-readable single-line form, identical to the DSL syntax."""
    if isinstance(constraint, Incompatibility):
        atoms = " & ".join(_render_atom(a) for a in constraint.atoms)
        return f"incompatible{{{atoms}}}"
    relation = (
        f"{_render_operand(constraint.left)} {constraint.op} "
        f"{_render_operand(constraint.right)}"
    )
    if constraint.guard:
        guard = " & ".join(_render_atom(a) for a in constraint.guard)
        return f"{guard} -> {relation}"
    return relation


def _render_atom(atom: Atom) -> str:
    return f"{atom.var}={render_value(atom.value)}"


def _render_operand(operand: Operand) -> str:
    if isinstance(operand, Literal):
        return render_value(operand.value)
    return operand.name


def _render_domain(domain: Domain) -> str:
    if isinstance(domain, IntegerRangeDomain):
        return f"[{domain.lo}..{domain.hi}]"
    return "[" + ", ".join(domain.values) + "]"
