"""Indexed store of annotation records, documents and annotator profiles.

Writes go through :class:`Store` and serialize under a lock; every write
builds a fresh immutable :class:`StoreSnapshot`, so readers holding a
snapshot never observe a partial update and snapshots can be shared across
threads freely.  Only explicit objects feed the fact indexes — implicit
objects are stored with their record but are not part of the fact base.

Persistence is a directory of line-delimited files (``annotations.annx``,
``documents.annx``, ``profiles.annx``), one JSON record per line behind an
``annotex/1`` header line.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Union

from . import errors, model
from .model import (
    AnnotationRecord,
    AnnotatorProfile,
    TargetRef,
    ValueList,
)

FORMAT_VERSION = "annotex/1"

ANNOTATIONS_FILE = "annotations.annx"
DOCUMENTS_FILE = "documents.annx"
PROFILES_FILE = "profiles.annx"


@dataclass(frozen=True)
class DocumentInfo:
    """Descriptor of an annotatable document (source or notice)."""

    id: str
    tier: str  # primary | secondary
    title: str = ""
    origin: Optional[str] = None


@dataclass(frozen=True)
class Fact:
    """One explicit (attribute, values) pair as stored on an annotation."""

    attribute: str
    values: ValueList
    annotation_id: str

    def labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.values)


class StoreSnapshot:
    """Immutable view of the store: records, registries and fact indexes."""

    __slots__ = ("records", "documents", "profiles", "version",
                 "by_attribute", "by_value_label", "by_target")

    def __init__(self, records, documents, profiles, version,
                 by_attribute, by_value_label, by_target):
        self.records: dict[str, AnnotationRecord] = records
        self.documents: dict[str, DocumentInfo] = documents
        self.profiles: dict[str, AnnotatorProfile] = profiles
        self.version: int = version
        # attribute -> ids of records carrying an explicit object with it
        self.by_attribute: dict[str, frozenset[str]] = by_attribute
        # value label -> (attribute, record id) pairs
        self.by_value_label: dict[str, frozenset[tuple[str, str]]] = by_value_label
        # target -> ids of records annotating it
        self.by_target: dict[TargetRef, frozenset[str]] = by_target

    # -- plumbing reads ------------------------------------------------------

    def snapshot(self) -> "StoreSnapshot":
        return self

    def get_annotation(self, annotation_id: str) -> AnnotationRecord:
        try:
            return self.records[annotation_id]
        except KeyError:
            raise errors.NotFound(f"no annotation {annotation_id!r}") from None

    def get_document(self, document_id: str) -> DocumentInfo:
        try:
            return self.documents[document_id]
        except KeyError:
            raise errors.NotFound(f"no document {document_id!r}") from None

    def get_profile(self, profile_id: str) -> AnnotatorProfile:
        try:
            return self.profiles[profile_id]
        except KeyError:
            raise errors.NotFound(f"no profile {profile_id!r}") from None

    def resolve_target(self, target: TargetRef) -> bool:
        """A target resolves when its id exists under the referenced tier."""
        if target.tier == "tertiary":
            return target.id in self.records
        doc = self.documents.get(target.id)
        return doc is not None and doc.tier == target.tier

    # -- fact enumeration -----------------------------------------------------

    def iter_facts(self, scope: Optional[TargetRef] = None) -> Iterator[Fact]:
        """Explicit facts in record-insertion order, object order within."""
        for record in self.records.values():
            if scope is not None and record.target != scope:
                continue
            for obj in record.object.explicits:
                yield Fact(obj.attribute, obj.values, record.id)

    def list_attributes_of(self, target: TargetRef) -> set[str]:
        return {fact.attribute for fact in self._facts_on(target)}

    def list_value_lists_of(self, target: TargetRef) -> list[tuple[str, ValueList]]:
        return [(fact.attribute, fact.values) for fact in self._facts_on(target)]

    def _facts_on(self, target: TargetRef) -> Iterator[Fact]:
        ids = self.by_target.get(target, frozenset())
        for record in self.records.values():  # dict order = insertion order
            if record.id in ids:
                for obj in record.object.explicits:
                    yield Fact(obj.attribute, obj.values, record.id)

    def lookup_value(self, label: str) -> set[tuple[str, str]]:
        """All (attribute, annotation id) pairs whose value list holds label."""
        return set(self.by_value_label.get(label, frozenset()))

    def records_with_attribute(self, attribute: str) -> frozenset[str]:
        return self.by_attribute.get(attribute, frozenset())

    # -- graph reads -----------------------------------------------------------

    def annotations_on(self, target: TargetRef) -> list[str]:
        return sorted(self.by_target.get(target, frozenset()))

    def children_of(self, annotation_id: str) -> list[str]:
        return self.annotations_on(TargetRef("tertiary", annotation_id))

    def tertiary_edges(self) -> list[tuple[str, str]]:
        """(annotation id, annotated annotation id) edges."""
        return [
            (record.id, record.target.id)
            for record in self.records.values()
            if record.target.tier == "tertiary"
        ]


def _empty_snapshot() -> StoreSnapshot:
    return StoreSnapshot({}, {}, {}, 0, {}, {}, {})


def _index_record(snap: StoreSnapshot, record: AnnotationRecord) -> tuple[dict, dict, dict]:
    by_attribute = dict(snap.by_attribute)
    by_value_label = dict(snap.by_value_label)
    by_target = dict(snap.by_target)
    for obj in record.object.explicits:
        by_attribute[obj.attribute] = by_attribute.get(obj.attribute, frozenset()) | {record.id}
        for entry in obj.values:
            pair = (obj.attribute, record.id)
            by_value_label[entry.label] = by_value_label.get(entry.label, frozenset()) | {pair}
    by_target[record.target] = by_target.get(record.target, frozenset()) | {record.id}
    return by_attribute, by_value_label, by_target


def _build_indexes(records: dict[str, AnnotationRecord]) -> tuple[dict, dict, dict]:
    by_attribute: dict[str, set] = {}
    by_value_label: dict[str, set] = {}
    by_target: dict[TargetRef, set] = {}
    for record in records.values():
        for obj in record.object.explicits:
            by_attribute.setdefault(obj.attribute, set()).add(record.id)
            for entry in obj.values:
                by_value_label.setdefault(entry.label, set()).add((obj.attribute, record.id))
        by_target.setdefault(record.target, set()).add(record.id)
    return (
        {k: frozenset(v) for k, v in by_attribute.items()},
        {k: frozenset(v) for k, v in by_value_label.items()},
        {k: frozenset(v) for k, v in by_target.items()},
    )


class Store:
    """Single-writer / multi-reader store.  Reads may be served either from
    the store itself (delegating to the current snapshot) or from a snapshot
    obtained via :meth:`snapshot`."""

    def __init__(self, snapshot: Optional[StoreSnapshot] = None):
        self._lock = threading.Lock()
        self._state = snapshot if snapshot is not None else _empty_snapshot()

    def snapshot(self) -> StoreSnapshot:
        return self._state

    @property
    def version(self) -> int:
        return self._state.version

    # -- registries -----------------------------------------------------------

    def add_document(self, doc: DocumentInfo) -> str:
        with self._lock:
            snap = self._state
            if not doc.id or not doc.id.strip():
                raise errors.EmptyId("document id must be non-empty")
            if doc.tier not in model.DOCUMENT_TIERS:
                raise errors.InvalidTier(
                    f"document tier {doc.tier!r} not one of {', '.join(model.DOCUMENT_TIERS)}"
                )
            if doc.id in snap.documents:
                raise errors.DuplicateId(f"document {doc.id!r} already registered")
            documents = dict(snap.documents)
            documents[doc.id] = doc
            self._state = StoreSnapshot(
                snap.records, documents, snap.profiles, snap.version + 1,
                snap.by_attribute, snap.by_value_label, snap.by_target,
            )
            return doc.id

    def add_profile(self, profile: AnnotatorProfile) -> str:
        with self._lock:
            snap = self._state
            model.raise_first(model.validate_profile(profile))
            if profile.id in snap.profiles:
                raise errors.DuplicateId(f"profile {profile.id!r} already registered")
            profiles = dict(snap.profiles)
            profiles[profile.id] = profile
            self._state = StoreSnapshot(
                snap.records, snap.documents, profiles, snap.version + 1,
                snap.by_attribute, snap.by_value_label, snap.by_target,
            )
            return profile.id

    # -- annotations -----------------------------------------------------------

    def add_annotation(self, record: AnnotationRecord) -> str:
        """Insert a validated record; all indexes update atomically.

        Raises DuplicateId / TargetCycle / UnresolvableTarget (and any
        structural violation) before any state is touched.
        """
        with self._lock:
            snap = self._state
            if record.id in snap.records:
                raise errors.DuplicateId(f"annotation {record.id!r} already stored")
            if record.target.tier == "tertiary":
                self._check_acyclic(snap, record)
            model.raise_first(model.validate_record(record, snap))
            by_attribute, by_value_label, by_target = _index_record(snap, record)
            records = dict(snap.records)
            records[record.id] = record
            self._state = StoreSnapshot(
                records, snap.documents, snap.profiles, snap.version + 1,
                by_attribute, by_value_label, by_target,
            )
            return record.id

    @staticmethod
    def _check_acyclic(snap: StoreSnapshot, record: AnnotationRecord) -> None:
        # Walk the annotation-of-annotation chain from the target; reaching
        # the new id (including the self-target case) would close a cycle.
        seen = set()
        cursor = record.target.id
        while cursor is not None:
            if cursor == record.id:
                raise errors.TargetCycle(
                    f"annotation {record.id!r} would annotate its own chain"
                )
            if cursor in seen:
                raise errors.TargetCycle(f"stored chain below {record.id!r} already cyclic")
            seen.add(cursor)
            parent = snap.records.get(cursor)
            if parent is None or parent.target.tier != "tertiary":
                cursor = None
            else:
                cursor = parent.target.id

    def delete_annotation(self, annotation_id: str) -> None:
        """Hard delete; refuses while other annotations target the record."""
        with self._lock:
            snap = self._state
            if annotation_id not in snap.records:
                raise errors.NotFound(f"no annotation {annotation_id!r}")
            dependents = snap.by_target.get(TargetRef("tertiary", annotation_id), frozenset())
            if dependents:
                raise errors.TargetInUse(
                    f"annotation {annotation_id!r} is annotated by {', '.join(sorted(dependents))}"
                )
            records = {k: v for k, v in snap.records.items() if k != annotation_id}
            by_attribute, by_value_label, by_target = _build_indexes(records)
            self._state = StoreSnapshot(
                records, snap.documents, snap.profiles, snap.version + 1,
                by_attribute, by_value_label, by_target,
            )

    def allocate_id(self, prefix: str = "ann_") -> str:
        snap = self._state
        n = len(snap.records) + 1
        while f"{prefix}{n:06d}" in snap.records:
            n += 1
        return f"{prefix}{n:06d}"

    # -- read delegation --------------------------------------------------------

    def get_annotation(self, annotation_id: str) -> AnnotationRecord:
        return self._state.get_annotation(annotation_id)

    def get_document(self, document_id: str) -> DocumentInfo:
        return self._state.get_document(document_id)

    def get_profile(self, profile_id: str) -> AnnotatorProfile:
        return self._state.get_profile(profile_id)

    def resolve_target(self, target: TargetRef) -> bool:
        return self._state.resolve_target(target)

    def iter_facts(self, scope: Optional[TargetRef] = None) -> Iterator[Fact]:
        return self._state.iter_facts(scope)

    def list_attributes_of(self, target: TargetRef) -> set[str]:
        return self._state.list_attributes_of(target)

    def list_value_lists_of(self, target: TargetRef) -> list[tuple[str, ValueList]]:
        return self._state.list_value_lists_of(target)

    def lookup_value(self, label: str) -> set[tuple[str, str]]:
        return self._state.lookup_value(label)


StoreLike = Union[Store, StoreSnapshot]


def as_snapshot(store: StoreLike) -> StoreSnapshot:
    return store.snapshot()


# -- persistence ---------------------------------------------------------------

def _dump_line(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, separators=(", ", ": "))


def document_to_json(doc: DocumentInfo) -> dict:
    return {"id": doc.id, "tier": doc.tier, "title": doc.title, "origin": doc.origin}


def document_from_json(data: dict) -> DocumentInfo:
    return DocumentInfo(
        id=data.get("id", ""),
        tier=data.get("tier", ""),
        title=data.get("title", ""),
        origin=data.get("origin"),
    )


def profile_to_json(profile: AnnotatorProfile) -> dict:
    return {
        "id": profile.id,
        "name": profile.name,
        "role": profile.role,
        "declared": profile.declared,
    }


def profile_from_json(data: dict) -> AnnotatorProfile:
    return AnnotatorProfile(
        id=data.get("id", ""),
        name=data.get("name", ""),
        role=data.get("role", "autre"),
        declared=bool(data.get("declared", True)),
    )


def save_store(store: StoreLike, destination: Union[str, Path]) -> None:
    """Write the snapshot into a store directory (created if missing)."""
    snap = as_snapshot(store)
    base = Path(destination)
    try:
        base.mkdir(parents=True, exist_ok=True)
        _write_section(base / DOCUMENTS_FILE,
                       (document_to_json(d) for d in snap.documents.values()))
        _write_section(base / PROFILES_FILE,
                       (profile_to_json(p) for p in snap.profiles.values()))
        _write_section(base / ANNOTATIONS_FILE,
                       (model.record_to_json(r) for r in snap.records.values()))
    except OSError as exc:
        raise errors.IoFailure(f"cannot write store at {base}: {exc}") from exc


def _write_section(path: Path, rows) -> None:
    with path.open("w", encoding="utf-8") as handle:
        handle.write(FORMAT_VERSION + "\n")
        for row in rows:
            handle.write(_dump_line(row) + "\n")


def load_store(source: Union[str, Path]) -> Store:
    """Rebuild a store from a store directory.

    Records re-enter through the normal insert path, so a foreign file that
    breaks referential integrity (unknown targets, cycles, duplicate ids)
    surfaces as CorruptStoreFile with the offending line number.  A missing
    or zero-byte section file is an empty section.
    """
    base = Path(source)
    store = Store()
    for row, line_no, path in _read_section(base / DOCUMENTS_FILE):
        _ingest(store.add_document, document_from_json(_as_mapping(row, line_no, path)),
                line_no, path)
    for row, line_no, path in _read_section(base / PROFILES_FILE):
        _ingest(store.add_profile, profile_from_json(_as_mapping(row, line_no, path)),
                line_no, path)
    for row, line_no, path in _read_section(base / ANNOTATIONS_FILE):
        _ingest(store.add_annotation, model.record_from_json(_as_mapping(row, line_no, path)),
                line_no, path)
    return store


def _as_mapping(row, line_no: int, path: str) -> dict:
    if not isinstance(row, dict):
        raise errors.CorruptStoreFile(
            f"{path}:{line_no}: expected one JSON object per line", line=line_no, path=path
        )
    return row


def _ingest(adder, item, line_no: int, path: str) -> None:
    try:
        adder(item)
    except errors.AnnotexError as exc:
        raise errors.CorruptStoreFile(
            f"{path}:{line_no}: {exc.message}", line=line_no, path=path
        ) from exc


def _read_section(path: Path):
    if not path.exists():
        return
    try:
        with path.open("r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise errors.IoFailure(f"cannot read {path}: {exc}") from exc
    if not lines:
        return
    if lines[0].strip() != FORMAT_VERSION:
        raise errors.CorruptStoreFile(
            f"{path}:1: bad header {lines[0]!r}, expected {FORMAT_VERSION!r}",
            line=1, path=str(path),
        )
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise errors.CorruptStoreFile(
                f"{path}:{i}: unparseable line ({exc.msg})", line=i, path=str(path)
            ) from exc
        yield row, i, str(path)
