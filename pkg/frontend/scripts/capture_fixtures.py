"""Regenerate tests/service_fixtures.ts from a live wrec service.

Starts `wrec serve` on a free port, replays every request the UI tests
mock, and freezes the raw response bytes as TypeScript constants. The live
integration test replays the same requests and asserts byte equality, so a
drift between the mocks and the service shows up as a test failure, not a
silent lie.

Usage: python3 scripts/capture_fixtures.py  (from the frontend/ directory)
"""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

FRONTEND = Path(__file__).resolve().parent.parent
KB_SOURCE = (FRONTEND.parent / "fixtures" / "pc.wrec").read_text(encoding="utf-8")

# The same knowledge base with both incompatibility constraints removed,
# as a maintenance edit would leave it.
EDITED_KB_SOURCE = """\
&QUESTIONS
usage? [Internet, Office, Scientific]
eefficiency? [high, medium]
maxprice? [0..3000]
country? [Austria, Germany, Switzerland, Other] keep
mb? [MBDiamond, MBSilver]
cpu? [CPUS, CPUD]

&PRODUCTS cpu_p, mb_p, os_p, price_p
hw1: CPUS; MBDiamond; OSAlpha; 1400
hw2: CPUS; MBSilver; OSAlpha; 2000
energystar: CPUD; MBSilver; OSBeta; 1600

&CONSTRAINTS
maxprice >= price_p
mb = mb_p
cpu = cpu_p

&TEST
test t1: usage=Scientific & cpu=CPUD & mb=MBSilver |show|
"""

# A keep-tagged requirement that no product can satisfy: the dead-end case.
DEAD_END_KB_SOURCE = """\
&QUESTIONS
color? [red, blue] keep

&PRODUCTS color_p
one: red

&CONSTRAINTS
color = color_p
"""

SIX_REQUIREMENTS = [
    {"var": "usage", "value": "Scientific"},
    {"var": "eefficiency", "value": "high"},
    {"var": "maxprice", "value": 1700},
    {"var": "country", "value": "Austria"},
    {"var": "mb", "value": "MBSilver"},
    {"var": "cpu", "value": "CPUD"},
]

REPAIRED_REQUIREMENTS = [
    {"var": "usage", "value": "Scientific"},
    {"var": "eefficiency", "value": "high"},
    {"var": "maxprice", "value": 1700},
    {"var": "country", "value": "Austria"},
    {"var": "mb", "value": "MBDiamond"},
    {"var": "cpu", "value": "CPUS"},
]


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def request(method: str, url: str, body: bytes | None = None, content_type: str = "application/json") -> bytes:
    req = urllib.request.Request(url, data=body, method=method)
    if body is not None:
        req.add_header("content-type", content_type)
    with urllib.request.urlopen(req) as response:
        return response.read()


def wait_until_up(base: str, deadline_s: float = 15.0) -> None:
    start = time.monotonic()
    while time.monotonic() - start < deadline_s:
        try:
            request("GET", f"{base}/kb/__probe__")
        except urllib.error.HTTPError:
            return  # any HTTP response means the server is up
        except urllib.error.URLError:
            time.sleep(0.1)
    raise RuntimeError("service did not come up in time")


def main() -> int:
    port = free_port()
    base = f"http://127.0.0.1:{port}"
    server = subprocess.Popen(
        [sys.executable, "-m", "wrec.cli", "serve", "--addr", f"127.0.0.1:{port}"],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        wait_until_up(base)
        captured: dict[str, bytes] = {}

        def post_json(path: str, payload: dict) -> bytes:
            return request("POST", f"{base}{path}", json.dumps(payload).encode("utf-8"))

        request("PUT", f"{base}/kb/pc", KB_SOURCE.encode("utf-8"), "text/plain; charset=utf-8")
        captured["SUMMARY"] = request("GET", f"{base}/kb/pc")
        captured["RECOMMEND_EMPTY"] = post_json("/kb/pc/recommend", {"requirements": []})
        for count in range(1, 7):
            captured[f"RECOMMEND_PREFIX_{count}"] = post_json(
                "/kb/pc/recommend", {"requirements": SIX_REQUIREMENTS[:count]}
            )
        captured["RECOMMEND_REPAIRED"] = post_json(
            "/kb/pc/recommend", {"requirements": REPAIRED_REQUIREMENTS}
        )
        captured["RECOMMEND_PIN_ENERGYSTAR"] = post_json(
            "/kb/pc/recommend",
            {"requirements": SIX_REQUIREMENTS, "item": "energystar"},
        )
        captured["TESTS_FAILING"] = post_json("/kb/pc/tests/run", {})
        captured["DIAGNOSIS_TWO_CONSTRAINTS"] = post_json("/kb/pc/diagnose", {})

        request(
            "PUT", f"{base}/kb/pc", EDITED_KB_SOURCE.encode("utf-8"), "text/plain; charset=utf-8"
        )
        captured["SUMMARY_EDITED"] = request("GET", f"{base}/kb/pc")
        captured["TESTS_ALL_PASS"] = post_json("/kb/pc/tests/run", {})
        captured["DIAGNOSIS_ALL_PASS"] = post_json("/kb/pc/diagnose", {})

        request(
            "PUT", f"{base}/kb/dead", DEAD_END_KB_SOURCE.encode("utf-8"), "text/plain; charset=utf-8"
        )
        captured["RECOMMEND_UNREPAIRABLE"] = post_json(
            "/kb/dead/recommend", {"requirements": [{"var": "color", "value": "blue"}]}
        )
    finally:
        server.terminate()
        server.wait(timeout=10)

    lines = [
        "/* Verbatim wrec service responses, frozen by scripts/capture_fixtures.py.",
        " *",
        " * Do not edit by hand: the live integration test replays the same",
        " * requests against a real service and asserts byte equality with",
        " * these constants, so stale fixtures fail loudly.",
        " */",
        "",
        f"export const KB_SOURCE = {json.dumps(KB_SOURCE)};",
        "",
        f"export const EDITED_KB_SOURCE = {json.dumps(EDITED_KB_SOURCE)};",
        "",
        f"export const DEAD_END_KB_SOURCE = {json.dumps(DEAD_END_KB_SOURCE)};",
        "",
    ]
    for name, body in captured.items():
        lines.append(f"export const {name} = {json.dumps(body.decode('utf-8'))};")
        lines.append("")
    out = FRONTEND / "tests" / "service_fixtures.ts"
    out.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {out} ({len(captured)} responses)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
