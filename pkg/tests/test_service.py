"""HTTP facade: endpoints, status codes, and body shapes."""

import json

import pytest
from fastapi.testclient import TestClient

from wrec.service import KbStore, create_app

RECOMMEND_BODY = {
    "requirements": [
        {"var": "usage", "value": "Scientific"},
        {"var": "eefficiency", "value": "high"},
        {"var": "maxprice", "value": 1700},
        {"var": "country", "value": "Austria"},
        {"var": "mb", "value": "MBSilver"},
        {"var": "cpu", "value": "CPUD"},
    ]
}


@pytest.fixture()
def client(fixture_source):
    app = create_app(KbStore())
    with TestClient(app) as client:
        response = client.put("/kb/pc", content=fixture_source)
        assert response.status_code == 200
        yield client


class TestPut:
    def test_versions_count_up_per_slot(self, client, fixture_source):
        assert client.put("/kb/pc", content=fixture_source).json() == {"version": 2}
        assert client.put("/kb/pc", content=fixture_source).json() == {"version": 3}
        assert client.put("/kb/other", content=fixture_source).json() == {"version": 1}

    def test_parse_errors_are_structured(self, client):
        response = client.put("/kb/pc", content="&QUESTIONS\nu? [A, A]\n")
        assert response.status_code == 422
        assert response.json() == {
            "line": 2,
            "column": 8,
            "message": "duplicate domain value 'A'",
            "kind": "domain-violation",
        }

    def test_failed_put_leaves_the_slot_unchanged(self, client):
        before = client.get("/kb/pc").json()["source"]
        client.put("/kb/pc", content="garbage")
        assert client.get("/kb/pc").json()["source"] == before

    def test_invalid_names_rejected(self, client, fixture_source):
        for name in ("1pc", "pc.wrec", "_x"):
            response = client.put(f"/kb/{name}", content=fixture_source)
            assert response.status_code == 400
            assert "error" in response.json()
        # an encoded slash never reaches the handler, the router drops it
        assert client.put("/kb/a%2Fb", content=fixture_source).status_code in (400, 404)

    def test_non_utf8_body_rejected(self, client):
        response = client.put("/kb/pc", content=b"\xff\xfe")
        assert response.status_code == 400


class TestGet:
    def test_unknown_kb_404(self, client):
        response = client.get("/kb/ghost")
        assert response.status_code == 404
        assert "ghost" in response.json()["error"]

    def test_summary_shape(self, client, fixture_source):
        body = client.get("/kb/pc").json()
        assert body["source"] == fixture_source
        assert body["products"] == ["hw1", "hw2", "energystar"]
        assert body["tests"] == ["t1"]
        by_name = {q["name"]: q for q in body["questions"]}
        assert by_name["country"]["keep"] is True
        assert by_name["usage"] == {
            "name": "usage",
            "domain": {"kind": "enum", "values": ["Internet", "Office", "Scientific"]},
            "keep": False,
        }
        assert by_name["maxprice"]["domain"] == {"kind": "range", "lo": 0, "hi": 3000}


class TestRecommend:
    def test_solutions(self, client):
        body = {"requirements": [{"var": "maxprice", "value": 1500}]}
        response = client.post("/kb/pc/recommend", json=body)
        assert response.status_code == 200
        assert response.json() == {"status": "solutions", "items": ["hw1"]}

    def test_empty_body_lists_everything(self, client):
        response = client.post("/kb/pc/recommend")
        assert response.json() == {
            "status": "solutions",
            "items": ["hw1", "hw2", "energystar"],
        }

    def test_repairs_shape_and_order(self, client):
        body = client.post("/kb/pc/recommend", json=RECOMMEND_BODY).json()
        assert body["status"] == "repairs"
        assert [d["remove"] for d in body["diagnoses"]] == [["mb", "cpu"], ["usage"]]
        first = body["diagnoses"][0]["repairs"]
        assert first == [
            {
                "changes": {"mb": "MBDiamond", "cpu": "CPUS"},
                "items": ["hw1"],
                "support": "2/6",
                "support_value": pytest.approx(1 / 3),
            }
        ]
        second = body["diagnoses"][1]["repairs"]
        assert {r["changes"]["usage"] for r in second} == {"Internet", "Office"}
        assert all(r["support"] == "1/6" for r in second)

    def test_n_limits_diagnoses(self, client):
        body = dict(RECOMMEND_BODY, n=1)
        response = client.post("/kb/pc/recommend", json=body)
        assert [d["remove"] for d in response.json()["diagnoses"]] == [["mb", "cpu"]]

    def test_item_mode(self, client):
        body = dict(RECOMMEND_BODY, item="energystar")
        response = client.post("/kb/pc/recommend", json=body)
        payload = response.json()
        assert payload["status"] == "repairs"
        assert [d["remove"] for d in payload["diagnoses"]] == [["usage"]]
        for repair in payload["diagnoses"][0]["repairs"]:
            assert repair["items"] == ["energystar"]

    def test_unknown_item_400(self, client):
        response = client.post("/kb/pc/recommend", json=dict(RECOMMEND_BODY, item="ghost"))
        assert response.status_code == 400

    def test_unknown_variable_400(self, client):
        body = {"requirements": [{"var": "ghost", "value": "x"}]}
        assert client.post("/kb/pc/recommend", json=body).status_code == 400

    def test_out_of_domain_value_400(self, client):
        body = {"requirements": [{"var": "maxprice", "value": 9999}]}
        assert client.post("/kb/pc/recommend", json=body).status_code == 400

    def test_value_coercion(self, client):
        # numeric strings and integral floats are accepted for range variables
        for value in ("1500", 1500.0):
            body = {"requirements": [{"var": "maxprice", "value": value}]}
            assert client.post("/kb/pc/recommend", json=body).json()["items"] == ["hw1"]
        for value in (True, 1500.5, ["x"]):
            body = {"requirements": [{"var": "maxprice", "value": value}]}
            assert client.post("/kb/pc/recommend", json=body).status_code == 400

    def test_malformed_bodies_400(self, client):
        for content in ("[1, 2]", "not json"):
            response = client.post(
                "/kb/pc/recommend",
                content=content,
                headers={"content-type": "application/json"},
            )
            assert response.status_code == 400
        assert (
            client.post("/kb/pc/recommend", json={"requirements": "usage"}).status_code
            == 400
        )
        assert (
            client.post(
                "/kb/pc/recommend", json={"requirements": [{"var": "usage"}]}
            ).status_code
            == 400
        )
        assert (
            client.post("/kb/pc/recommend", json=dict(RECOMMEND_BODY, n=0)).status_code
            == 400
        )

    def test_unknown_kb_404(self, client):
        assert client.post("/kb/ghost/recommend").status_code == 404

    def test_responses_are_byte_stable(self, client):
        a = client.post("/kb/pc/recommend", json=RECOMMEND_BODY).content
        b = client.post("/kb/pc/recommend", json=RECOMMEND_BODY).content
        assert a == b
        assert a.endswith(b"\n")
        json.loads(a)


class TestTestsRun:
    def test_fixture_results(self, client):
        response = client.post("/kb/pc/tests/run")
        assert response.json() == {
            "results": [{"name": "t1", "status": "fail", "show": True}]
        }

    def test_unknown_kb_404(self, client):
        assert client.post("/kb/ghost/tests/run").status_code == 404


class TestDiagnose:
    def test_fixture_diagnosis(self, client):
        response = client.post("/kb/pc/diagnose")
        body = response.json()
        assert body["all_pass"] is False
        assert body["diagnoses"] == [
            {
                "constraints": [
                    {"id": "c1", "text": "incompatible{usage=Scientific & cpu=CPUD}"},
                    {"id": "c2", "text": "incompatible{usage=Scientific & mb=MBSilver}"},
                ]
            }
        ]

    def test_ordering_validation(self, client):
        ok = client.post("/kb/pc/diagnose", json={"ordering": "complexity"})
        assert ok.status_code == 200
        bad = client.post("/kb/pc/diagnose", json={"ordering": "alphabetical"})
        assert bad.status_code == 400

    def test_unrepairable_409(self, client):
        source = (
            "&QUESTIONS\nu? [A, B]\n&PRODUCTS x_p\np1: 1\n"
            "&TEST\ntest impossible: u=A & u=B\n"
        )
        assert client.put("/kb/broken", content=source).status_code == 200
        response = client.post("/kb/broken/diagnose")
        assert response.status_code == 409
        assert "impossible" in response.json()["error"]

    def test_all_pass(self, client):
        source = "&QUESTIONS\nu? [A]\n&PRODUCTS x_p\np1: 1\n&TEST\ntest fine: u=A\n"
        client.put("/kb/fine", content=source)
        assert client.post("/kb/fine/diagnose").json() == {
            "diagnoses": [],
            "all_pass": True,
        }


class TestStore:
    def test_directory_persistence(self, tmp_path, fixture_source):
        store = KbStore(tmp_path)
        store.put("pc", fixture_source)
        assert (tmp_path / "pc.wrec").read_text(encoding="utf-8") == fixture_source

        reloaded = KbStore(tmp_path)
        slot = reloaded.get("pc")
        assert slot is not None
        assert slot.source == fixture_source and slot.version == 1
        assert reloaded.names() == ["pc"]

    def test_reload_skips_invalid_names(self, tmp_path, fixture_source):
        (tmp_path / "9bad.wrec").write_text(fixture_source, encoding="utf-8")
        store = KbStore(tmp_path)
        assert store.names() == []

    def test_get_unknown_returns_none(self):
        assert KbStore().get("ghost") is None
