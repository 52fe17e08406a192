"""JSON payload builders shared by the HTTP service and the CLI.

Both facades must emit byte-identical JSON for the same engine result, so
every response body is built here and serialized through `to_json_bytes`.
Array order is contractual: diagnoses appear in preference order, repairs
in enumeration order, removed variables and changed values in requirement
entry order.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from .dsl import ParseError, render_constraint
from .kbtest import KbDiagnosisResult, TestResult
from .model import (
    Diagnosis,
    EnumeratedDomain,
    KnowledgeBase,
    Repair,
    Requirement,
)
from .repair import RecommendationResult, STATUS_REPAIRS, STATUS_SOLUTIONS


def to_json_bytes(payload: Mapping) -> bytes:
    """Canonical UTF-8 rendering, newline-terminated."""
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _entry_order(diagnosis: Diagnosis, requirements: Sequence[Requirement]) -> list[str]:
    by_var = {r.var: r.entry_rank for r in requirements}
    return sorted(diagnosis.elements, key=lambda var: by_var[var])


def _repair_payload(repair: Repair, n_requirements: int) -> dict:
    support = f"{repair.diagnosis.cardinality}/{n_requirements}"
    return {
        "changes": {var: value for var, value in repair.adaptation.items()},
        "items": list(repair.items),
        "support": support,
        "support_value": float(repair.support),
    }


def recommendation_payload(
    result: RecommendationResult, requirements: Sequence[Requirement]
) -> dict:
    payload: dict = {"status": result.status}
    if result.status == STATUS_SOLUTIONS:
        payload["items"] = list(result.items)
    elif result.status == STATUS_REPAIRS:
        payload["diagnoses"] = [
            {
                "remove": _entry_order(group.diagnosis, requirements),
                "repairs": [
                    _repair_payload(r, len(requirements)) for r in group.repairs
                ],
            }
            for group in result.groups
        ]
    return payload


def test_run_payload(results: Sequence[TestResult]) -> dict:
    return {
        "results": [
            {"name": r.name, "status": r.status, "show": r.show} for r in results
        ]
    }


def kb_diagnosis_payload(kb: KnowledgeBase, result: KbDiagnosisResult) -> dict:
    def ranked(diagnosis: Diagnosis) -> list[str]:
        return sorted(diagnosis.elements, key=lambda cid: kb.constraint(cid).definition_rank)

    return {
        "diagnoses": [
            {
                "constraints": [
                    {"id": cid, "text": render_constraint(kb.constraint(cid))}
                    for cid in ranked(d)
                ]
            }
            for d in result.diagnoses
        ],
        "all_pass": result.all_pass,
    }


def kb_summary_payload(source: str, kb: KnowledgeBase) -> dict:
    def domain_payload(domain) -> dict:
        if isinstance(domain, EnumeratedDomain):
            return {"kind": "enum", "values": list(domain.values)}
        return {"kind": "range", "lo": domain.lo, "hi": domain.hi}

    return {
        "source": source,
        "questions": [
            {"name": v.name, "domain": domain_payload(v.domain), "keep": v.keep}
            for v in kb.user_vars
        ],
        "products": [p.name for p in kb.products],
        "tests": [t.name for t in kb.tests],
    }


def parse_error_payload(error: ParseError) -> dict:
    return {
        "line": error.line,
        "column": error.column,
        "message": error.message,
        "kind": error.kind,
    }


def error_payload(message: str) -> dict:
    return {"error": message}
