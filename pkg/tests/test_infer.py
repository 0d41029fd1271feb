"""Explicitation engine: missing-half recovery against the fact base."""

import random

import pytest

from annotex import errors
from annotex.infer import (
    explicitate_attribute,
    explicitate_object,
    explicitate_values,
    resolve_token,
)
from annotex.model import make_implicit_object, labels_of

from genrand import oracle_facts, random_store


class TestExplicitateAttribute:
    def test_pertinent_is_two_way_ambiguous(self, f1):
        result = explicitate_attribute(["pertinent"], f1)
        assert result.resolved
        got = [(b.fact.attribute, b.fact.annotation_id) for b in result.candidates]
        assert got == [("ordonner", "note_211"), ("souligner", "note_211")]

    def test_single_attribute_many_facts(self, f1):
        result = explicitate_attribute(["désinformation"], f1)
        got = [(b.fact.attribute, b.fact.annotation_id) for b in result.candidates]
        assert got == [("mots-clés", "note_008"), ("mots-clés", "note_211"),
                       ("mots-clés", "note_702")]

    def test_unknown_label_unresolved(self, f1):
        result = explicitate_attribute(["zzz-inconnu"], f1)
        assert not result.resolved and result.candidates == ()

    def test_empty_values_rejected(self, f1):
        with pytest.raises(errors.EmptyQueryValues):
            explicitate_attribute([], f1)

    def test_match_count_orders_first(self, f1):
        # two shared labels beat one, whatever the attribute names say
        result = explicitate_attribute(["pertinent", "pauvre"], f1)
        assert result.candidates[0].fact.attribute == "ordonner"
        assert result.candidates[0].matched_labels == ("pertinent", "pauvre")
        assert result.candidates[1].matched_labels == ("pertinent",)

    def test_require_all_mode(self, f1):
        relaxed = explicitate_attribute(["pertinent", "pauvre"], f1)
        strict = explicitate_attribute(["pertinent", "pauvre"], f1, require_all=True)
        assert len(relaxed.candidates) == 2
        assert len(strict.candidates) == 1
        assert strict.candidates[0].fact.attribute == "ordonner"


class TestExplicitateValues:
    def test_ranked_scale_recovered(self, f1):
        result = explicitate_values("ordonner", f1)
        assert result.resolved and len(result.candidates) == 1
        values = result.candidates[0].fact.values
        assert labels_of(values) == ("pauvre", "faible", "moyen", "riche", "pertinent")
        assert [v.rank for v in values] == [0, 1, 2, 3, 4]

    def test_one_binding_per_fact(self, f1):
        result = explicitate_values("auteur", f1)
        assert [b.fact.annotation_id for b in result.candidates] == [
            "note_008", "note_211", "note_702"]
        assert all(labels_of(b.fact.values) == ("Alain Juillet",) for b in result.candidates)

    def test_unknown_attribute_unresolved(self, f1):
        assert not explicitate_values("inexistant", f1).resolved

    def test_empty_attribute_rejected(self, f1):
        with pytest.raises(errors.EmptyQueryAttribute):
            explicitate_values("  ", f1)


class TestExplicitateObject:
    def test_attribute_missing(self, demo):
        obj = make_implicit_object(values=["stratégie"])
        results = explicitate_object(obj, demo)
        assert [(r.object.attribute, labels_of(r.object.values)) for r in results] == [
            ("souligner", ("stratégie",))]
        assert results[0].binding.fact.annotation_id == "note_91007"

    def test_values_missing(self, demo):
        obj = make_implicit_object(attribute="mots clés")
        results = explicitate_object(obj, demo)
        assert [(r.object.attribute, labels_of(r.object.values)) for r in results] == [
            ("mots clés", ("ATN", "formalisme", "analyse"))]

    def test_deduplicated_by_attribute_and_labels(self, f1):
        # note_702 and note_008 carry identical mots-clés lists: one candidate
        obj = make_implicit_object(attribute="mots-clés")
        results = explicitate_object(obj, f1)
        lists = [labels_of(r.object.values) for r in results]
        assert len(lists) == len(set(lists)) == 2

    def test_explicit_input_rejected(self, f1):
        promoted = make_implicit_object("a", ["v"])  # becomes explicit
        with pytest.raises(errors.BothHalvesEmpty):
            explicitate_object(promoted, f1)


class TestResolveToken:
    def test_two_way_token(self, f1):
        bindings = resolve_token("pertinent", f1)
        assert [(b.fact.attribute, b.fact.annotation_id) for b in bindings] == [
            ("ordonner", "note_211"), ("souligner", "note_211")]
        assert all(b.matched_labels == ("pertinent",) for b in bindings)

    def test_single_binding(self, f1):
        bindings = resolve_token("protection du patrimoine", f1)
        assert [(b.fact.attribute, b.fact.annotation_id) for b in bindings] == [
            ("mots-clés", "note_211")]

    def test_empty_label(self, f1):
        with pytest.raises(errors.EmptyLabel):
            resolve_token("", f1)


class TestProperties:
    def test_round_trip_recovery(self):
        rng = random.Random(11)
        for _ in range(30):
            store = random_store(rng, max_facts=40)
            for attribute, values, rid in oracle_facts(store):
                attr_result = explicitate_attribute(values, store)
                assert any(
                    b.fact.attribute == attribute and b.fact.annotation_id == rid
                    for b in attr_result.candidates
                )
                value_result = explicitate_values(attribute, store)
                assert any(
                    b.fact.values == values and b.fact.annotation_id == rid
                    for b in value_result.candidates
                )

    def test_scope_monotonicity(self):
        rng = random.Random(12)
        for _ in range(20):
            store = random_store(rng, max_facts=40)
            snap = store.snapshot()
            targets = {r.target for r in snap.records.values()}
            for target in targets:
                for attribute, values, _ in oracle_facts(store, target):
                    scoped = explicitate_attribute(values, store, scope=target)
                    wide = explicitate_attribute(values, store)
                    scoped_set = {(b.fact.attribute, b.fact.annotation_id, b.fact.values)
                                  for b in scoped.candidates}
                    wide_set = {(b.fact.attribute, b.fact.annotation_id, b.fact.values)
                                for b in wide.candidates}
                    assert scoped_set <= wide_set
                    scoped_v = explicitate_values(attribute, store, scope=target)
                    wide_v = explicitate_values(attribute, store)
                    assert {b.fact for b in scoped_v.candidates} <= {
                        b.fact for b in wide_v.candidates}

    def test_determinism(self):
        rng = random.Random(13)
        store = random_store(rng, max_facts=60)
        for attribute, values, _ in oracle_facts(store)[:20]:
            assert explicitate_attribute(values, store) == explicitate_attribute(values, store)
            assert explicitate_values(attribute, store) == explicitate_values(attribute, store)
            token = values[0].label
            assert resolve_token(token, store) == resolve_token(token, store)

    def test_oracle_equivalence_naive_scan(self):
        rng = random.Random(14)
        for _ in range(20):
            store = random_store(rng, max_facts=50)
            facts = oracle_facts(store)
            labels = sorted({e.label for _, values, _ in facts for e in values})
            for label in labels[:10]:
                expected = sorted(
                    (attr, rid) for attr, values, rid in facts
                    if label in labels_of(values)
                )
                got = sorted((b.fact.attribute, b.fact.annotation_id)
                             for b in resolve_token(label, store))
                assert got == expected
            attrs = sorted({attr for attr, _, _ in facts})
            for attribute in attrs[:10]:
                expected_lists = sorted(
                    (rid, labels_of(values)) for attr, values, rid in facts
                    if attr == attribute
                )
                got_lists = sorted(
                    (b.fact.annotation_id, labels_of(b.fact.values))
                    for b in explicitate_values(attribute, store).candidates
                )
                assert got_lists == expected_lists
