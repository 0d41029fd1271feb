"""CLI workbench: exit codes, output contracts, store round trips."""

import pytest
from fastapi.testclient import TestClient

from annotex import fixtures
from annotex.cli import EXIT_IO, EXIT_OK, EXIT_USER, main
from annotex.service import create_app
from annotex.store import load_store, save_store

CLASSIC = ('("auteur", ["Alain Juillet"]) ET '
           '("mots-clés", ["désinformation", "intelligence stratégique", "décision"])')
CONSTRAINED = '(["désinformation", "protection du patrimoine", "pertinent"])'


@pytest.fixture()
def store_dir(tmp_path):
    path = tmp_path / "store"
    save_store(fixtures.build_f1(), path)
    return path


def run(store_dir, *argv):
    return main(["--store", str(store_dir), *argv])


class TestAnnotate:
    def test_direct_fact(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "doc_ei_1",
                   "--attr", "souligner", "--values", "stratégie,développement")
        assert code == EXIT_OK
        new_id = capsys.readouterr().out.strip()
        record = load_store(store_dir).get_annotation(new_id)
        assert record.object.explicits[0].labels() == ("stratégie", "développement")

    def test_canonical_value_list_syntax(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "doc_ei_1",
                   "--attr", "ordonner", "--values", '[["pauvre", 0], ["riche", 3]]')
        assert code == EXIT_OK
        new_id = capsys.readouterr().out.strip()
        record = load_store(store_dir).get_annotation(new_id)
        assert [v.rank for v in record.object.explicits[0].values] == [0, 3]

    def test_values_only_is_implicit(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "doc_ei_1", "--values", "pertinent")
        assert code == EXIT_OK
        new_id = capsys.readouterr().out.strip()
        record = load_store(store_dir).get_annotation(new_id)
        assert record.object.implicits and not record.object.explicits

    def test_semantic_function_mode(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "doc_ei_1",
                   "--function", "indexer", "--content",
                   "stratégie et développement durable de la veille")
        assert code == EXIT_OK
        new_id = capsys.readouterr().out.strip()
        record = load_store(store_dir).get_annotation(new_id)
        assert record.semantic_function == "indexer"
        assert record.object.explicits[0].attribute == "mots-clés"

    def test_no_input_is_user_error(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "doc_ei_1")
        assert code == EXIT_USER
        assert "BothHalvesEmpty" in capsys.readouterr().err

    def test_unknown_target_is_user_error(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "nulle-part", "--attr", "a",
                   "--values", "v")
        assert code == EXIT_USER
        assert "UnresolvableTarget" in capsys.readouterr().err

    def test_tertiary_target_auto_resolved(self, store_dir, capsys):
        code = run(store_dir, "annotate", "--target", "note_211",
                   "--attr", "commentaire", "--values", "à vérifier")
        assert code == EXIT_OK
        new_id = capsys.readouterr().out.strip()
        record = load_store(store_dir).get_annotation(new_id)
        assert record.target.tier == "tertiary"


class TestSearch:
    def test_classic_three_lines(self, store_dir, capsys):
        assert run(store_dir, "search", CLASSIC) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["note_008", "note_211", "note_702"]

    def test_constrained_with_explain(self, store_dir, capsys):
        assert run(store_dir, "search", CONSTRAINED, "--explain") == EXIT_OK
        out = capsys.readouterr().out
        assert "note_211" in out
        assert "rewritten:" in out and " ET " in out and " OU " in out
        assert '"souligner"' in out and '"ordonner"' in out

    def test_syntax_error_caret(self, store_dir, capsys):
        assert run(store_dir, "search", '("a", [)') == EXIT_USER
        err = capsys.readouterr().err
        assert "SyntaxError" in err
        caret_line = err.splitlines()[-1]
        assert caret_line.strip() == "^"
        assert caret_line.index("^") == 2 + 7  # two-space indent + offset

    def test_structured_output_matches_api_bytes(self, store_dir, capsys):
        with capsys.disabled():
            pass
        assert run(store_dir, "--format", "json", "search", CONSTRAINED) == EXIT_OK
        out = capsys.readouterr().out.encode("utf-8").rstrip(b"\n")
        client = TestClient(create_app(load_store(store_dir)))
        response = client.get("/api/v1/search", params={"q": CONSTRAINED})
        assert out == response.content

    def test_strict_mode(self, store_dir, capsys):
        assert run(store_dir, "search", '(["zzz"])', "--strict") == EXIT_USER
        assert "UnresolvableToken" in capsys.readouterr().err


class TestExplicitate:
    def test_values(self, store_dir, capsys):
        assert run(store_dir, "explicitate", "--values", '["pertinent"]') == EXIT_OK
        out = capsys.readouterr().out
        assert "ordonner" in out and "souligner" in out

    def test_attribute(self, store_dir, capsys):
        assert run(store_dir, "explicitate", "--attr", "auteur") == EXIT_OK
        assert "Alain Juillet" in capsys.readouterr().out

    def test_nothing_given(self, store_dir, capsys):
        assert run(store_dir, "explicitate") == EXIT_USER


class TestStoreCommands:
    def test_init_creates_empty_store(self, tmp_path, capsys):
        path = tmp_path / "fresh"
        assert main(["--store", str(path), "init"]) == EXIT_OK
        assert load_store(path).snapshot().version == 0

    def test_fixture_materializes_f1(self, tmp_path, capsys):
        path = tmp_path / "fx"
        assert main(["--store", str(path), "fixture", "f1"]) == EXIT_OK
        store = load_store(path)
        assert set(store.snapshot().records) == {"note_702", "note_008", "note_211"}

    def test_fixture_demo(self, tmp_path):
        path = tmp_path / "fx"
        assert main(["--store", str(path), "fixture", "demo"]) == EXIT_OK
        store = load_store(path)
        assert set(store.snapshot().records) == {"note_91007", "note_71007", "note_56007"}

    def test_fixture_refuses_overwrite(self, store_dir, capsys):
        assert run(store_dir, "fixture", "demo") == EXIT_USER

    def test_ingest_and_profile(self, tmp_path, capsys):
        path = tmp_path / "s"
        assert main(["--store", str(path), "init"]) == EXIT_OK
        assert main(["--store", str(path), "ingest", "--id", "d1", "--tier", "secondary",
                     "--title", "Notice"]) == EXIT_OK
        assert main(["--store", str(path), "profile", "--id", "p1", "--role",
                     "veilleur"]) == EXIT_OK
        store = load_store(path)
        assert store.get_document("d1").tier == "secondary"
        assert store.get_profile("p1").role == "veilleur"

    def test_export_import(self, store_dir, tmp_path, capsys):
        dest = tmp_path / "copy"
        assert run(store_dir, "export", str(dest)) == EXIT_OK
        fresh = tmp_path / "fresh"
        assert main(["--store", str(fresh), "init"]) == EXIT_OK
        assert main(["--store", str(fresh), "import", str(dest)]) == EXIT_OK
        assert set(load_store(fresh).snapshot().records) == {
            "note_702", "note_008", "note_211"}

    def test_delete(self, store_dir, capsys):
        assert run(store_dir, "delete", "note_702") == EXIT_OK
        assert "note_702" not in load_store(store_dir).snapshot().records

    def test_corrupt_store_is_io_exit(self, store_dir, capsys):
        (store_dir / "annotations.annx").write_text("annotex/999\n", encoding="utf-8")
        assert run(store_dir, "search", CLASSIC) == EXIT_IO
        assert "CorruptStoreFile" in capsys.readouterr().err

    def test_env_var_store(self, tmp_path, monkeypatch, capsys):
        path = tmp_path / "env-store"
        save_store(fixtures.build_f1(), path)
        monkeypatch.setenv("ANNOTEX_STORE", str(path))
        assert main(["search", CLASSIC]) == EXIT_OK
        assert "note_211" in capsys.readouterr().out
