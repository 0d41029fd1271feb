"""HTTP API behaviour, error-code table completeness, golden responses."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from annotex import errors, fixtures
from annotex.service import ERROR_STATUS, api_json, create_app

GOLDEN_DIR = Path(__file__).parent / "golden"

CLASSIC = ('("auteur", ["Alain Juillet"]) ET '
           '("mots-clés", ["désinformation", "intelligence stratégique", "décision"])')
CONSTRAINED = '(["désinformation", "protection du patrimoine", "pertinent"])'


@pytest.fixture()
def client(f1):
    return TestClient(create_app(f1))


def _body(annotator="veilleur_1", **overrides):
    data = {
        "context": {"kind": "interprétation", "note": ""},
        "target": {"tier": "primary", "id": "doc_ei_1"},
        "annotator": annotator,
        "semantic_function": "indexer",
        "object": {"explicits": [{"attribute": "thème", "values": ["veille"]}]},
    }
    data.update(overrides)
    return data


class TestAnnotations:
    def test_create_valid(self, client):
        response = client.post("/api/v1/annotations", json=_body())
        assert response.status_code == 201
        created = response.json()
        assert created["id"].startswith("ann_")
        got = client.get(f"/api/v1/annotations/{created['id']}")
        assert got.status_code == 200
        assert got.json()["annotation"]["object"]["explicits"][0]["attribute"] == "thème"

    def test_empty_object_rejected(self, client):
        response = client.post("/api/v1/annotations", json=_body(object={}))
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "EmptyAnnotationObject"

    def test_tertiary_self_reference(self, client):
        first = client.post("/api/v1/annotations", json=_body()).json()["id"]
        assert first
        response = client.post("/api/v1/annotations", json=_body(
            id="boucle", target={"tier": "tertiary", "id": "boucle"}))
        assert response.status_code == 422
        assert response.json()["error"]["code"] == "TargetCycle"

    def test_duplicate_id(self, client):
        client.post("/api/v1/annotations", json=_body(id="dup"))
        response = client.post("/api/v1/annotations", json=_body(id="dup"))
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "DuplicateId"

    def test_get_unknown(self, client):
        response = client.get("/api/v1/annotations/absente")
        assert response.status_code == 404
        assert response.json()["error"]["code"] == "NotFound"

    def test_delete(self, client):
        created = client.post("/api/v1/annotations", json=_body()).json()["id"]
        assert client.delete(f"/api/v1/annotations/{created}").status_code == 200
        assert client.get(f"/api/v1/annotations/{created}").status_code == 404

    def test_delete_targeted_refused(self, client):
        client.post("/api/v1/annotations", json=_body(id="cible"))
        client.post("/api/v1/annotations", json=_body(
            id="dessus", target={"tier": "tertiary", "id": "cible"}))
        response = client.delete("/api/v1/annotations/cible")
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "TargetInUse"

    def test_expect_version(self, client, f1):
        version = f1.version
        ok = client.post(f"/api/v1/annotations?expect_version={version}", json=_body())
        assert ok.status_code == 201
        stale = client.post(f"/api/v1/annotations?expect_version={version}", json=_body())
        assert stale.status_code == 412
        assert stale.json()["error"]["code"] == "VersionMismatch"

    def test_malformed_json_body(self, client):
        response = client.post("/api/v1/annotations", content=b"{nope",
                               headers={"content-type": "application/json"})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "InvalidBody"


class TestSearch:
    def test_classic(self, client):
        response = client.get("/api/v1/search", params={"q": CLASSIC})
        assert response.status_code == 200
        data = response.json()
        assert data["ids"] == ["note_008", "note_211", "note_702"]
        assert data["trace"] is None

    def test_constrained_with_trace(self, client):
        response = client.get("/api/v1/search", params={"q": CONSTRAINED})
        data = response.json()
        assert data["ids"] == ["note_211"]
        tokens = {t["token"]: t for t in data["trace"]["tokens"]}
        assert {b["attribute"] for b in tokens["pertinent"]["bindings"]} == {
            "souligner", "ordonner"}
        assert data["trace"]["query"].count(" ET ") == 1
        assert data["trace"]["query"].count(" OU ") == 1

    def test_syntax_error_carries_position(self, client):
        response = client.get("/api/v1/search", params={"q": '("a", [)'})
        assert response.status_code == 400
        error = response.json()["error"]
        assert error["code"] == "SyntaxError"
        assert error["detail"]["position"] == 7
        assert error["detail"]["expected"]

    def test_strict_flag(self, client):
        response = client.get("/api/v1/search", params={"q": '(["zzz"])', "strict": "true"})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "UnresolvableToken"

    def test_match_flag_validated(self, client):
        response = client.get("/api/v1/search", params={"q": CLASSIC, "match": "fuzzy"})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "InvalidBody"


class TestExplicitate:
    def test_values_only(self, client):
        response = client.post("/api/v1/explicitate", json={"values": ["pertinent"]})
        data = response.json()
        assert data["resolved"] is True
        assert [c["attribute"] for c in data["candidates"]] == ["ordonner", "souligner"]

    def test_attribute_only(self, client):
        response = client.post("/api/v1/explicitate", json={"attribute": "auteur"})
        data = response.json()
        assert all(c["values"] == ["Alain Juillet"] for c in data["candidates"])

    def test_empty_body(self, client):
        response = client.post("/api/v1/explicitate", json={})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "BothHalvesEmpty"

    def test_complete_object_rejected(self, client):
        response = client.post("/api/v1/explicitate",
                               json={"attribute": "a", "values": ["v"]})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "InvalidBody"

    def test_scope(self, client):
        response = client.post("/api/v1/explicitate", json={
            "values": ["pertinent"],
            "scope": {"tier": "primary", "id": "doc_ei_1"},
        })
        assert response.json()["resolved"] is True


class TestRegistriesAndGraph:
    def test_documents(self, client):
        data = client.get("/api/v1/documents").json()
        assert [d["id"] for d in data["documents"]] == ["doc_ei_1"]
        created = client.post("/api/v1/documents", json={
            "id": "doc_2", "tier": "secondary", "title": "Notice"})
        assert created.status_code == 201
        assert client.get("/api/v1/documents/doc_2").json()["document"]["tier"] == "secondary"

    def test_profiles(self, client):
        data = client.get("/api/v1/profiles").json()
        assert {p["id"] for p in data["profiles"]} == {"veilleur_1", "analyste_1"}
        response = client.post("/api/v1/profiles", json={"id": "d1", "role": "décideur"})
        assert response.status_code == 201

    def test_graph_nests_tertiary(self, client):
        client.post("/api/v1/annotations", json=_body(
            id="sur_211", target={"tier": "tertiary", "id": "note_211"}))
        data = client.get("/api/v1/graph/doc_ei_1").json()
        assert data["document"]["id"] == "doc_ei_1"
        roots = {node["annotation"]["id"]: node for node in data["annotations"]}
        assert set(roots) == {"note_702", "note_008", "note_211"}
        children = roots["note_211"]["children"]
        assert [c["annotation"]["id"] for c in children] == ["sur_211"]

    def test_graph_unknown_document(self, client):
        assert client.get("/api/v1/graph/absente").status_code == 404

    def test_health(self, client):
        data = client.get("/api/v1/health").json()
        assert data["status"] == "ok"
        assert data["format"] == "annotex/1"
        assert data["annotations"] == 3


def test_every_error_code_in_table():
    """Each package error maps to exactly one wire status."""
    def subclasses(cls):
        for sub in cls.__subclasses__():
            yield sub
            yield from subclasses(sub)

    codes = {cls.code for cls in subclasses(errors.AnnotexError)}
    codes.add(errors.AnnotexError.code)
    missing = codes - set(ERROR_STATUS)
    assert not missing, f"codes without a status: {sorted(missing)}"


class TestGoldenResponses:
    """Responses are a pure function of (store state, request)."""

    @pytest.mark.parametrize("name, method, path, payload", [
        ("health", "GET", "/api/v1/health", None),
        ("search_classic", "GET", "/api/v1/search?q=" + CLASSIC.replace(" ", "%20"), None),
        ("search_constrained", "GET",
         "/api/v1/search?q=" + CONSTRAINED.replace(" ", "%20"), None),
        ("explicitate_pertinent", "POST", "/api/v1/explicitate",
         {"values": ["pertinent"]}),
        ("graph_doc_ei_1", "GET", "/api/v1/graph/doc_ei_1", None),
    ])
    def test_golden(self, name, method, path, payload):
        client = TestClient(create_app(fixtures.build_f1()))
        if method == "GET":
            response = client.get(path)
        else:
            response = client.post(path, json=payload)
        assert response.status_code == 200
        expected = (GOLDEN_DIR / f"{name}.json").read_bytes()
        assert response.content == expected.strip()
        # and the committed file is exactly the canonical encoding
        assert api_json(json.loads(expected)) == expected.strip()


class TestWriteThrough:
    def test_save_to_flushes_on_write(self, tmp_path):
        from annotex.store import load_store, save_store

        store_dir = tmp_path / "persisted"
        store = fixtures.build_f1()
        save_store(store, store_dir)
        client = TestClient(create_app(store, save_to=str(store_dir)))
        created = client.post("/api/v1/annotations", json={
            "context": {"kind": "proposition"},
            "target": {"tier": "primary", "id": "doc_ei_1"},
            "annotator": "veilleur_1",
            "semantic_function": "inclure",
            "object": {"explicits": [{"attribute": "étiquette", "values": ["urgent"]}]},
        })
        assert created.status_code == 201
        reloaded = load_store(store_dir)
        assert created.json()["id"] in reloaded.snapshot().records
        client.delete(f"/api/v1/annotations/{created.json()['id']}")
        assert created.json()["id"] not in load_store(store_dir).snapshot().records
