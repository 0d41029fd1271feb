"""Domain model: annotation objects, records and their formation rules.

An annotation content unit is an (attribute, values) pair.  When both halves
are known the unit is *explicit*; when exactly one half is known it is
*implicit* and the missing half can later be inferred from the explicit fact
base.  Construction goes through the ``make_*`` factories, which enforce the
formation rules and raise typed errors; the dataclasses themselves are plain
containers so that deserialized data can be represented first and audited
afterwards with :func:`validate_record`.

Labels and attribute names are compared case-sensitively and
accent-sensitively (exact codepoint match); no normalization is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import errors

CONTEXT_KINDS = ("requête", "recherche-information", "interprétation", "proposition")
ANNOTATOR_ROLES = ("veilleur", "analyste", "décideur", "autre")
TIERS = ("primary", "secondary", "tertiary")
DOCUMENT_TIERS = ("primary", "secondary")  # tertiary "documents" are annotations
SEMANTIC_FUNCTIONS = ("partager", "inclure", "filtrer", "indexer", "faciliter", "attacher")


@dataclass(frozen=True)
class ValueEntry:
    """One value: a text label, optionally carrying an ordinal rank.

    Equality of values elsewhere in the engine is label-only; the rank is
    payload (a ranked scale entry like ("pertinent", 4) is still matched by
    the bare label "pertinent").
    """

    label: str
    rank: Optional[int] = None


ValueList = tuple[ValueEntry, ...]

ValueInput = Union[str, ValueEntry, tuple, list]


def make_value_list(values: Iterable[ValueInput]) -> ValueList:
    """Coerce labels / (label, rank) pairs / ValueEntry items into a ValueList.

    Raises EmptyValueLabel for blank labels and DuplicateValueLabel when the
    same label occurs twice; an empty input is allowed here (object factories
    decide whether emptiness is legal).
    """
    entries: list[ValueEntry] = []
    seen: set[str] = set()
    for item in values:
        if isinstance(item, ValueEntry):
            entry = item
        elif isinstance(item, str):
            entry = ValueEntry(item)
        elif isinstance(item, (tuple, list)) and len(item) == 2:
            entry = ValueEntry(item[0], item[1])
        else:
            raise errors.EmptyValueLabel(f"unusable value item: {item!r}")
        if not isinstance(entry.label, str) or not entry.label.strip():
            raise errors.EmptyValueLabel("value labels must be non-empty text")
        if entry.rank is not None and not isinstance(entry.rank, int):
            raise errors.EmptyValueLabel(
                f"rank of {entry.label!r} must be an integer, got {entry.rank!r}"
            )
        if entry.label in seen:
            raise errors.DuplicateValueLabel(f"duplicate value label {entry.label!r}")
        seen.add(entry.label)
        entries.append(entry)
    return tuple(entries)


def labels_of(values: Sequence[ValueEntry]) -> tuple[str, ...]:
    return tuple(entry.label for entry in values)


@dataclass(frozen=True)
class ExplicitObject:
    """A complete content unit: attribute plus one or more values."""

    attribute: str
    values: ValueList

    def labels(self) -> tuple[str, ...]:
        return labels_of(self.values)


@dataclass(frozen=True)
class ImplicitObject:
    """A content unit missing exactly one half.

    The factories never build an implicit object with both halves present;
    such input is promoted to an ExplicitObject at construction, so the
    implicit/explicit distinction stays structural.
    """

    attribute: Optional[str] = None
    values: Optional[ValueList] = None

    @property
    def missing(self) -> str:
        return "values" if self.attribute is not None else "attribute"


@dataclass(frozen=True)
class AnnotationObject:
    """The content bundle of one annotation: implicit and explicit units."""

    implicits: tuple[ImplicitObject, ...] = ()
    explicits: tuple[ExplicitObject, ...] = ()


@dataclass(frozen=True)
class TargetRef:
    """Reference to the annotated thing.

    primary = source document, secondary = bibliographic notice,
    tertiary = another annotation (annotations are themselves annotatable).
    """

    tier: str
    id: str


@dataclass(frozen=True)
class AnnotatorProfile:
    id: str
    name: str = ""
    role: str = "autre"
    declared: bool = True


@dataclass(frozen=True)
class AnnotationContext:
    """Why the annotation exists: query, information search, interpretation
    or proposal, plus a free note."""

    kind: str
    note: str = ""


@dataclass(frozen=True)
class AnnotationRecord:
    """One stored annotation: context, target, annotator, semantic function,
    the content object, and free-form dimension metadata.

    ``dimensions`` holds the explicitation/identification/traduction entries
    (conventions, language tags, mnemonic lists, correspondence tables) as an
    opaque key -> text map. Records are treated as immutable once stored.
    """

    id: str
    context: AnnotationContext
    target: TargetRef
    annotator: str
    semantic_function: str
    object: AnnotationObject
    operation_type: str = ""
    objective: str = ""
    signification: str = ""
    dimensions: Mapping[str, str] = field(default_factory=dict)
    created_at: str = ""
    updated_at: str = ""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    path: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


# -- formation operations ----------------------------------------------------

def make_explicit_object(attribute: str, values: Iterable[ValueInput]) -> ExplicitObject:
    """Build an explicit (attribute, values) unit; values must be non-empty."""
    if not isinstance(attribute, str) or not attribute.strip():
        raise errors.EmptyAttribute("explicit objects need a non-empty attribute")
    value_list = make_value_list(values)
    if not value_list:
        raise errors.EmptyValueList(f"attribute {attribute!r} carries no values")
    return ExplicitObject(attribute=attribute, values=value_list)


def make_implicit_object(
    attribute: Optional[str] = None,
    values: Optional[Iterable[ValueInput]] = None,
) -> Union[ImplicitObject, ExplicitObject]:
    """Build a one-half content unit; both halves present promotes to explicit."""
    has_attribute = isinstance(attribute, str) and bool(attribute.strip())
    value_list = make_value_list(values) if values is not None else ()
    if has_attribute and value_list:
        return make_explicit_object(attribute, value_list)
    if has_attribute:
        return ImplicitObject(attribute=attribute)
    if value_list:
        return ImplicitObject(values=value_list)
    raise errors.BothHalvesEmpty("an implicit object needs an attribute or values")


def assemble_annotation_object(
    implicits: Iterable[ImplicitObject] = (),
    explicits: Iterable[ExplicitObject] = (),
) -> AnnotationObject:
    implicits = tuple(implicits)
    explicits = tuple(explicits)
    if not implicits and not explicits:
        raise errors.EmptyAnnotationObject("annotation object has no content units")
    return AnnotationObject(implicits=implicits, explicits=explicits)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def make_record(
    id: str,
    context: AnnotationContext,
    target: TargetRef,
    annotator: str,
    semantic_function: str,
    object: AnnotationObject,
    *,
    operation_type: str = "",
    objective: str = "",
    signification: str = "",
    dimensions: Optional[Mapping[str, str]] = None,
    created_at: Optional[str] = None,
    updated_at: Optional[str] = None,
) -> AnnotationRecord:
    """Build a record and fail fast on any structural violation."""
    record = AnnotationRecord(
        id=id,
        context=context,
        target=target,
        annotator=annotator,
        semantic_function=semantic_function,
        object=object,
        operation_type=operation_type,
        objective=objective,
        signification=signification,
        dimensions=dict(dimensions or {}),
        created_at=created_at if created_at is not None else utc_now(),
        updated_at=updated_at if updated_at is not None else utc_now(),
    )
    report = validate_record(record)
    if not report.ok:
        first = report.violations[0]
        raise _ERROR_BY_CODE.get(first.code, errors.AnnotexError)(first.message)
    return record


_ERROR_BY_CODE = {
    cls.code: cls
    for cls in (
        errors.EmptyAttribute,
        errors.EmptyValueLabel,
        errors.EmptyValueList,
        errors.DuplicateValueLabel,
        errors.BothHalvesEmpty,
        errors.EmptyAnnotationObject,
        errors.InvalidContextKind,
        errors.InvalidRole,
        errors.InvalidTier,
        errors.InvalidSemanticFunction,
        errors.UnresolvableTarget,
        errors.EmptyId,
    )
}


def raise_first(report: ValidationReport) -> None:
    """Raise the typed error matching the report's first violation, if any."""
    if report.ok:
        return
    first = report.violations[0]
    raise _ERROR_BY_CODE.get(first.code, errors.AnnotexError)(first.message)


# -- validation ---------------------------------------------------------------

def _check_value_list(values, path: str, out: list[Violation], *, allow_empty: bool) -> None:
    if not isinstance(values, tuple):
        out.append(Violation("EmptyValueList", f"{path}: values must be a tuple", path))
        return
    if not values and not allow_empty:
        out.append(Violation("EmptyValueList", f"{path}: needs at least one value", path))
    seen: set[str] = set()
    for i, entry in enumerate(values):
        where = f"{path}[{i}]"
        if not isinstance(entry, ValueEntry) or not isinstance(entry.label, str) or not entry.label.strip():
            out.append(Violation("EmptyValueLabel", f"{where}: empty value label", where))
            continue
        if entry.rank is not None and not isinstance(entry.rank, int):
            out.append(Violation("EmptyValueLabel", f"{where}: rank must be an integer", where))
        if entry.label in seen:
            out.append(Violation("DuplicateValueLabel", f"{where}: duplicate label {entry.label!r}", where))
        seen.add(entry.label)


def validate_object(obj: AnnotationObject, out: Optional[list[Violation]] = None) -> list[Violation]:
    """Collect every structural violation of an annotation object."""
    out = out if out is not None else []
    if not isinstance(obj, AnnotationObject):
        out.append(Violation("EmptyAnnotationObject", "missing annotation object", "object"))
        return out
    if not obj.implicits and not obj.explicits:
        out.append(Violation("EmptyAnnotationObject", "annotation object has no content units", "object"))
    for i, exp in enumerate(obj.explicits):
        path = f"object.explicits[{i}]"
        if not isinstance(exp.attribute, str) or not exp.attribute.strip():
            out.append(Violation("EmptyAttribute", f"{path}: empty attribute", path))
        _check_value_list(exp.values, f"{path}.values", out, allow_empty=False)
    for i, imp in enumerate(obj.implicits):
        path = f"object.implicits[{i}]"
        has_attr = isinstance(imp.attribute, str) and bool(imp.attribute.strip())
        has_values = bool(imp.values)
        if not has_attr and not has_values:
            out.append(Violation("BothHalvesEmpty", f"{path}: both halves empty", path))
        if has_attr and has_values:
            # both halves present must have been promoted to explicit
            out.append(Violation("BothHalvesEmpty", f"{path}: complete pair stored as implicit", path))
        if imp.values is not None:
            _check_value_list(imp.values, f"{path}.values", out, allow_empty=True)
    return out


def validate_record(record: AnnotationRecord, resolver=None) -> ValidationReport:
    """Audit a record against every structural invariant.

    ``resolver``, when given, must expose ``resolve_target(TargetRef) -> bool``
    (the knowledge store qualifies); without it the reference-level checks are
    skipped.  Violations are report entries, never exceptions.
    """
    out: list[Violation] = []
    if not isinstance(record.id, str) or not record.id.strip():
        out.append(Violation("EmptyId", "record id must be non-empty", "id"))
    if not isinstance(record.context, AnnotationContext) or record.context.kind not in CONTEXT_KINDS:
        kind = getattr(record.context, "kind", None)
        out.append(Violation(
            "InvalidContextKind",
            f"context kind {kind!r} not one of {', '.join(CONTEXT_KINDS)}",
            "context.kind",
        ))
    if not isinstance(record.target, TargetRef) or record.target.tier not in TIERS:
        tier = getattr(record.target, "tier", None)
        out.append(Violation("InvalidTier", f"target tier {tier!r} not one of {', '.join(TIERS)}", "target.tier"))
    elif not record.target.id or not str(record.target.id).strip():
        out.append(Violation("UnresolvableTarget", "target id must be non-empty", "target.id"))
    elif resolver is not None and not resolver.resolve_target(record.target):
        out.append(Violation(
            "UnresolvableTarget",
            f"target {record.target.tier}:{record.target.id} does not resolve",
            "target",
        ))
    if record.semantic_function not in SEMANTIC_FUNCTIONS:
        out.append(Violation(
            "InvalidSemanticFunction",
            f"semantic function {record.semantic_function!r} not one of {', '.join(SEMANTIC_FUNCTIONS)}",
            "semantic_function",
        ))
    validate_object(record.object, out)
    return ValidationReport(tuple(out))


def validate_profile(profile: AnnotatorProfile) -> ValidationReport:
    out: list[Violation] = []
    if not profile.id or not profile.id.strip():
        out.append(Violation("EmptyId", "profile id must be non-empty", "id"))
    if profile.role not in ANNOTATOR_ROLES:
        out.append(Violation("InvalidRole", f"role {profile.role!r} not one of {', '.join(ANNOTATOR_ROLES)}", "role"))
    return ValidationReport(tuple(out))


# -- canonical JSON form ------------------------------------------------------
# A value entry serializes to its plain label, or to a two-element
# [label, rank] pair; this is the wire and store-file surface everywhere.

def value_entry_to_json(entry: ValueEntry):
    if entry.rank is None:
        return entry.label
    return [entry.label, entry.rank]


def value_entry_from_json(item) -> ValueEntry:
    if isinstance(item, str):
        return ValueEntry(item)
    if isinstance(item, (list, tuple)) and len(item) == 2:
        return ValueEntry(item[0], item[1])
    raise errors.EmptyValueLabel(f"unusable serialized value: {item!r}")


def value_list_to_json(values: Sequence[ValueEntry]) -> list:
    return [value_entry_to_json(v) for v in values]


def value_list_from_json(items) -> ValueList:
    if not isinstance(items, (list, tuple)):
        raise errors.EmptyValueList(f"expected a list of values, got {items!r}")
    return tuple(value_entry_from_json(item) for item in items)


def object_to_json(obj: AnnotationObject) -> dict:
    data: dict = {}
    if obj.explicits:
        data["explicits"] = [
            {"attribute": e.attribute, "values": value_list_to_json(e.values)}
            for e in obj.explicits
        ]
    if obj.implicits:
        implicits = []
        for imp in obj.implicits:
            item: dict = {}
            if imp.attribute is not None:
                item["attribute"] = imp.attribute
            if imp.values is not None:
                item["values"] = value_list_to_json(imp.values)
            implicits.append(item)
        data["implicits"] = implicits
    return data


def object_from_json(data) -> AnnotationObject:
    if not isinstance(data, dict):
        raise errors.EmptyAnnotationObject(f"expected an object mapping, got {data!r}")
    explicits = []
    for item in data.get("explicits", []) or []:
        explicits.append(ExplicitObject(
            attribute=item.get("attribute", ""),
            values=value_list_from_json(item.get("values", [])),
        ))
    implicits = []
    for item in data.get("implicits", []) or []:
        implicits.append(ImplicitObject(
            attribute=item.get("attribute"),
            values=value_list_from_json(item["values"]) if "values" in item else None,
        ))
    return AnnotationObject(implicits=tuple(implicits), explicits=tuple(explicits))


def record_to_json(record: AnnotationRecord) -> dict:
    return {
        "id": record.id,
        "context": {"kind": record.context.kind, "note": record.context.note},
        "target": {"tier": record.target.tier, "id": record.target.id},
        "annotator": record.annotator,
        "semantic_function": record.semantic_function,
        "operation_type": record.operation_type,
        "objective": record.objective,
        "signification": record.signification,
        "object": object_to_json(record.object),
        "dimensions": dict(record.dimensions),
        "created_at": record.created_at,
        "updated_at": record.updated_at,
    }


def record_from_json(data: dict) -> AnnotationRecord:
    """Rebuild a record from its serialized form without raising on content
    violations; run :func:`validate_record` on the result to audit it."""
    context = data.get("context") or {}
    target = data.get("target") or {}
    return AnnotationRecord(
        id=data.get("id", ""),
        context=AnnotationContext(kind=context.get("kind", ""), note=context.get("note", "")),
        target=TargetRef(tier=target.get("tier", ""), id=target.get("id", "")),
        annotator=data.get("annotator", ""),
        semantic_function=data.get("semantic_function", ""),
        object=object_from_json(data.get("object", {})),
        operation_type=data.get("operation_type", ""),
        objective=data.get("objective", ""),
        signification=data.get("signification", ""),
        dimensions=dict(data.get("dimensions") or {}),
        created_at=data.get("created_at", ""),
        updated_at=data.get("updated_at", ""),
    )
