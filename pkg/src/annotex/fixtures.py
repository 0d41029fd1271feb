"""Built-in demo stores used by tests, the CLI `fixture` command and the UI.

``f1`` is the reference base for search examples: three notes on one source
document, two of which share the same author/keyword facts while the third
adds a highlight and a ranked relevance scale.  ``demo`` is a smaller base of
three single-fact notes on one document, used for enumeration examples.
"""

from __future__ import annotations

from .model import (
    AnnotationContext,
    AnnotatorProfile,
    TargetRef,
    assemble_annotation_object,
    make_explicit_object,
    make_record,
)
from .store import DocumentInfo, Store

_T0 = "2007-11-05T09:00:00+00:00"

RANKED_SCALE = (("pauvre", 0), ("faible", 1), ("moyen", 2), ("riche", 3), ("pertinent", 4))


def _note(store, note_id, target, annotator, facts, kind="recherche-information", when=_T0):
    explicits = [make_explicit_object(attr, values) for attr, values in facts]
    store.add_annotation(make_record(
        id=note_id,
        context=AnnotationContext(kind=kind),
        target=target,
        annotator=annotator,
        semantic_function="indexer",
        object=assemble_annotation_object(explicits=explicits),
        created_at=when,
        updated_at=when,
    ))


def build_f1() -> Store:
    """Reference base: notes note_702 / note_008 / note_211 on one source."""
    store = Store()
    store.add_document(DocumentInfo(
        id="doc_ei_1",
        tier="primary",
        title="Entretien sur l'intelligence économique et ses outils",
        origin="local://corpus/entretien-ei",
    ))
    store.add_profile(AnnotatorProfile(id="veilleur_1", name="Veilleur 1", role="veilleur"))
    store.add_profile(AnnotatorProfile(id="analyste_1", name="Analyste 1", role="analyste"))
    target = TargetRef("primary", "doc_ei_1")
    _note(store, "note_702", target, "veilleur_1", (
        ("auteur", ("Alain Juillet",)),
        ("mots-clés", ("désinformation", "intelligence stratégique", "décision")),
    ))
    _note(store, "note_008", target, "analyste_1", (
        ("auteur", ("Alain Juillet",)),
        ("mots-clés", ("désinformation", "intelligence stratégique", "décision")),
    ))
    _note(store, "note_211", target, "veilleur_1", (
        ("auteur", ("Alain Juillet",)),
        ("mots-clés", ("désinformation", "intelligence stratégique", "décision",
                       "protection du patrimoine")),
        ("souligner", ("pertinent",)),
        ("ordonner", RANKED_SCALE),
    ))
    return store


def build_demo() -> Store:
    """Three single-fact notes on one document: a highlight, a keyword list
    and a ranked scale."""
    store = Store()
    store.add_document(DocumentInfo(
        id="doc_corpus_1",
        tier="primary",
        title="Document de corpus",
        origin="local://corpus/doc-1",
    ))
    store.add_profile(AnnotatorProfile(id="veilleur_1", name="Veilleur 1", role="veilleur"))
    target = TargetRef("primary", "doc_corpus_1")
    _note(store, "note_91007", target, "veilleur_1", (
        ("souligner", ("stratégie", "développement")),
    ))
    _note(store, "note_71007", target, "veilleur_1", (
        ("mots clés", ("ATN", "formalisme", "analyse")),
    ))
    _note(store, "note_56007", target, "veilleur_1", (
        ("ordonner", RANKED_SCALE),
    ))
    return store


FIXTURES = {"f1": build_f1, "demo": build_demo}
