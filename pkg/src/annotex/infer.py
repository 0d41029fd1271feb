"""Explicitation: recover the missing half of an implicit object.

An implicit object is confronted with the explicit fact base.  A fact whose
value list shares at least one label with the queried values supplies its
attribute; a fact carrying the queried attribute supplies its full value
list.  Inference is one step deep — facts only, no rule chaining.

Candidate order is deterministic: descending count of matched labels, then
attribute, then annotation id, then fact insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import errors, model
from .model import ExplicitObject, ImplicitObject, TargetRef, ValueList
from .store import Fact, StoreLike, as_snapshot


@dataclass(frozen=True)
class Binding:
    """One supporting fact together with the half it supplies.

    ``inferred`` says which half the fact stands in for ("attribute" or
    "values"); ``matched_labels`` are the query labels the fact accounts for
    and are always drawn from the fact's own value list.
    """

    inferred: str
    fact: Fact
    matched_labels: tuple[str, ...] = ()

    @property
    def attribute(self) -> str:
        return self.fact.attribute

    @property
    def values(self) -> ValueList:
        return self.fact.values


@dataclass(frozen=True)
class ExplicitationResult:
    candidates: tuple[Binding, ...]

    @property
    def resolved(self) -> bool:
        return bool(self.candidates)


@dataclass(frozen=True)
class Explicitation:
    """An inferred complete object plus the binding that produced it."""

    object: ExplicitObject
    binding: Binding


def _sorted(bindings: Iterable[Binding]) -> tuple[Binding, ...]:
    return tuple(sorted(
        bindings,
        key=lambda b: (-len(b.matched_labels), b.fact.attribute, b.fact.annotation_id),
    ))


def _query_labels(values) -> tuple[str, ...]:
    if isinstance(values, (str, bytes)):
        raise errors.EmptyQueryValues("values must be a sequence of labels, not a string")
    entries = model.make_value_list(values)
    return model.labels_of(entries)


def explicitate_attribute(
    values,
    store: StoreLike,
    scope: Optional[TargetRef] = None,
    require_all: bool = False,
) -> ExplicitationResult:
    """Attribute missing: find facts whose value lists overlap ``values``.

    Default match is any shared label; ``require_all`` asks for every query
    label to be present in the supporting fact.
    """
    labels = _query_labels(values)
    if not labels:
        raise errors.EmptyQueryValues("cannot infer an attribute from no values")
    wanted = set(labels)
    bindings = []
    for fact in as_snapshot(store).iter_facts(scope):
        fact_labels = set(fact.labels())
        matched = tuple(label for label in labels if label in fact_labels)
        if not matched:
            continue
        if require_all and len(matched) != len(wanted):
            continue
        bindings.append(Binding("attribute", fact, matched))
    return ExplicitationResult(_sorted(bindings))


def explicitate_values(
    attribute: str,
    store: StoreLike,
    scope: Optional[TargetRef] = None,
) -> ExplicitationResult:
    """Values missing: every fact carrying ``attribute`` supplies its list."""
    if not isinstance(attribute, str) or not attribute.strip():
        raise errors.EmptyQueryAttribute("cannot infer values from an empty attribute")
    bindings = [
        Binding("values", fact)
        for fact in as_snapshot(store).iter_facts(scope)
        if fact.attribute == attribute
    ]
    return ExplicitationResult(_sorted(bindings))


def explicitate_object(
    obj: ImplicitObject,
    store: StoreLike,
    scope: Optional[TargetRef] = None,
    require_all: bool = False,
) -> list[Explicitation]:
    """Turn an implicit object into complete candidates, one per binding,
    deduplicated by (attribute, value-label set).  Empty list = unresolved."""
    if not isinstance(obj, ImplicitObject):
        raise errors.BothHalvesEmpty(f"expected an implicit object, got {type(obj).__name__}")
    results: list[Explicitation] = []
    if obj.attribute is None:
        for binding in explicitate_attribute(obj.values, store, scope, require_all).candidates:
            candidate = ExplicitObject(binding.fact.attribute, obj.values)
            results.append(Explicitation(candidate, binding))
    else:
        for binding in explicitate_values(obj.attribute, store, scope).candidates:
            candidate = ExplicitObject(obj.attribute, binding.fact.values)
            results.append(Explicitation(candidate, binding))
    seen: set[tuple[str, tuple[str, ...]]] = set()
    unique: list[Explicitation] = []
    for item in results:
        key = (item.object.attribute, tuple(sorted(label for label in model.labels_of(item.object.values))))
        if key in seen:
            continue
        seen.add(key)
        unique.append(item)
    return unique


def resolve_token(
    label: str,
    store: StoreLike,
    scope: Optional[TargetRef] = None,
) -> tuple[Binding, ...]:
    """All (attribute, fact) bindings whose value list contains ``label``.

    The constrained-search rewriter consumes this token by token.
    """
    if not isinstance(label, str) or not label.strip():
        raise errors.EmptyLabel("cannot resolve an empty token")
    bindings = [
        Binding("attribute", fact, (label,))
        for fact in as_snapshot(store).iter_facts(scope)
        if label in fact.labels()
    ]
    return _sorted(bindings)
