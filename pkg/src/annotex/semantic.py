"""Semantic functions: from an annotator action on content to annotation objects.

Six action kinds are built in — partager, inclure, filtrer, indexer,
faciliter, attacher — each backed by a pack of associative rules.  A rule
produces an attribute template and/or extracted values; rules yielding both
halves emit explicit objects, one-half rules emit implicit ones.  The default
extraction rules are deliberately plain (regex, tokenizer with a shipped
stopword list, heading detection): deterministic, no linguistic analysis.

Packs are replaceable at runtime and loadable from a JSON file:

    {"kind": "indexer",
     "params": {"top_k": 3, "with_counts": false},
     "rules": [{"pattern": null, "attribute": "mots-clés", "values": "tokens"}]}
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from . import errors, model
from .model import AnnotationObject, ValueEntry

KINDS = model.SEMANTIC_FUNCTIONS

#: value-extraction directives a rule may use
DIRECTIVES = ("group", "selection", "span", "content", "tokens", "headings", "none")

Span = tuple[int, int]


@dataclass(frozen=True)
class Rule:
    """One associative rule: optional content pattern, optional attribute
    template, and a value-extraction directive.

    A rule with ``values="none"`` contributes only its attribute (implicit
    object); a rule without an attribute contributes only values.
    """

    values: str
    pattern: Optional[str] = None
    attribute: Optional[str] = None


@dataclass(frozen=True)
class RulePack:
    kind: str
    rules: tuple[Rule, ...]
    params: Mapping[str, object] = field(default_factory=dict)

    def param(self, name: str, default):
        return self.params.get(name, default)


def validate_rule_pack(pack: RulePack) -> None:
    if pack.kind not in KINDS:
        raise errors.InvalidRulePack(f"unknown semantic function kind {pack.kind!r}")
    if not pack.rules:
        raise errors.InvalidRulePack(f"pack {pack.kind!r} has no rules")
    for i, rule in enumerate(pack.rules):
        where = f"pack {pack.kind!r} rule {i}"
        if rule.values not in DIRECTIVES:
            raise errors.InvalidRulePack(f"{where}: unknown directive {rule.values!r}")
        if rule.attribute is not None and not rule.attribute.strip():
            raise errors.InvalidRulePack(f"{where}: attribute template is blank")
        if rule.values == "none" and rule.attribute is None:
            raise errors.InvalidRulePack(f"{where}: rule produces neither half")
        if rule.pattern is not None:
            try:
                re.compile(rule.pattern)
            except re.error as exc:
                raise errors.InvalidRulePack(f"{where}: bad pattern ({exc})") from exc


# -- stopwords and tokenization ------------------------------------------------

def _load_stopwords(name: str) -> frozenset[str]:
    text = resources.files("annotex.data").joinpath(f"stopwords_{name}.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


_STOPWORDS = {"fr": _load_stopwords("fr"), "en": _load_stopwords("en")}

_WORD = re.compile(r"[^\W\d_]+")
_HEADING = re.compile(r"^\s*(#{1,6}\s+\S.*|(?:\d+[.)])+\s*\S.*)$")


def tokenize(content: str) -> list[str]:
    """Letter runs in order of appearance; accents kept, no case folding."""
    return _WORD.findall(content)


def top_keywords(content: str, top_k: int, stopwords: frozenset[str]) -> list[tuple[str, int]]:
    """(token, count) pairs ranked by count then first occurrence."""
    tokens = [t for t in tokenize(content) if t.casefold() not in stopwords]
    counts = Counter(tokens)
    first_seen = {}
    for i, token in enumerate(tokens):
        first_seen.setdefault(token, i)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], first_seen[kv[0]]))
    return ranked[: max(top_k, 0)]


def _selection_text(content: str, selection: Optional[Span]) -> Optional[str]:
    if selection is None:
        return None
    start, end = selection
    start = max(0, int(start))
    end = min(len(content), int(end))
    if start >= end:
        return None
    return content[start:end].strip() or None


def _extract(rule: Rule, pack: RulePack, content: str, selection: Optional[Span]) -> list[ValueEntry]:
    if rule.values == "none":
        return []
    if rule.values == "group":
        found: list[str] = []
        if rule.pattern is None:
            return []
        for match in re.finditer(rule.pattern, content):
            pieces = [g for g in match.groups() if g] or [match.group(0)]
            for piece in pieces:
                if piece not in found:
                    found.append(piece)
        return [ValueEntry(v) for v in found]
    if rule.values == "selection":
        text = _selection_text(content, selection)
        return [ValueEntry(text)] if text else []
    if rule.values == "span":
        text = _selection_text(content, selection) or content.strip()
        return [ValueEntry(text)] if text else []
    if rule.values == "content":
        text = content.strip()
        return [ValueEntry(text)] if text else []
    if rule.values == "tokens":
        names = str(pack.param("stopwords", "fr,en"))
        stopwords: frozenset[str] = frozenset()
        for name in names.split(","):
            stopwords |= _STOPWORDS.get(name.strip(), frozenset())
        pairs = top_keywords(content, int(pack.param("top_k", 5)), stopwords)
        if pack.param("with_counts", False):
            return [ValueEntry(token, count) for token, count in pairs]
        return [ValueEntry(token) for token, _ in pairs]
    if rule.values == "headings":
        labels: list[str] = []
        for line in content.splitlines():
            if _HEADING.match(line):
                label = line.strip().lstrip("#").strip()
                if label and label not in labels:
                    labels.append(label)
        return [ValueEntry(label) for label in labels]
    raise errors.InvalidRulePack(f"unknown directive {rule.values!r}")


# -- application ------------------------------------------------------------------

def apply_semantic_function(
    kind: str,
    content: str,
    selection: Optional[Span] = None,
    pack: Optional[RulePack] = None,
    registry: Optional["RulePackRegistry"] = None,
) -> AnnotationObject:
    """Run the pack's rules over content and assemble the resulting object.

    Rules fire in declaration order; with the ``first_match`` param only the
    first firing rule contributes.  Raises NoRuleFired when nothing matched.
    """
    if pack is None:
        pack = (registry or DEFAULT_REGISTRY).get(kind)
    if pack.kind != kind:
        raise errors.InvalidRulePack(f"pack is for {pack.kind!r}, asked for {kind!r}")
    if not content or not content.strip():
        raise errors.NoRuleFired("no content to annotate")
    implicits = []
    explicits = []
    for rule in pack.rules:
        if rule.pattern is not None and not re.search(rule.pattern, content):
            continue
        values = _extract(rule, pack, content, selection)
        if rule.values == "none":
            implicits.append(model.make_implicit_object(attribute=rule.attribute))
        elif not values:
            continue  # pattern matched but nothing extractable
        elif rule.attribute is not None:
            explicits.append(model.make_explicit_object(rule.attribute, values))
        else:
            implicits.append(model.make_implicit_object(values=values))
        if pack.param("first_match", False):
            break
    if not implicits and not explicits:
        raise errors.NoRuleFired(f"no {kind!r} rule matched the content")
    return model.assemble_annotation_object(implicits=implicits, explicits=explicits)


def default_packs() -> tuple[RulePack, ...]:
    """The built-in pack per kind, mirroring each action's plain reading:
    share -> access mode, include -> tag, filter -> captured selection,
    index -> top keywords, facilitate -> outline, attach -> link."""
    return (
        RulePack("partager", (
            Rule(pattern=r"\b(lecture|écriture|mise à jour)\b", attribute="accès", values="group"),
        )),
        RulePack("inclure", (
            Rule(attribute="étiquette", values="span"),
        )),
        RulePack("filtrer", (
            Rule(values="selection"),
        )),
        RulePack("indexer", (
            Rule(attribute="mots-clés", values="tokens"),
        ), params={"top_k": 5}),
        RulePack("faciliter", (
            Rule(attribute="plan", values="headings"),
        )),
        RulePack("attacher", (
            Rule(pattern=r"""(https?://[^\s"'<>)]+|www\.[^\s"'<>)]+)""", attribute="lien", values="group"),
        )),
    )


class RulePackRegistry:
    """Kind -> pack mapping; replacement is atomic and returns the prior pack."""

    def __init__(self, packs: Sequence[RulePack] = ()):
        self._packs: dict[str, RulePack] = {}
        for pack in packs:
            self.register(pack)

    def register(self, pack: RulePack) -> Optional[RulePack]:
        validate_rule_pack(pack)
        prior = self._packs.get(pack.kind)
        self._packs[pack.kind] = pack
        return prior

    def get(self, kind: str) -> RulePack:
        if kind not in KINDS:
            raise errors.InvalidSemanticFunction(f"unknown semantic function {kind!r}")
        if kind not in self._packs:
            raise errors.InvalidRulePack(f"no pack registered for {kind!r}")
        return self._packs[kind]

    def kinds(self) -> tuple[str, ...]:
        return tuple(self._packs)


DEFAULT_REGISTRY = RulePackRegistry(default_packs())


# -- declarative pack files ---------------------------------------------------------

def rule_pack_from_json(data: dict) -> RulePack:
    if not isinstance(data, dict):
        raise errors.InvalidRulePack("pack file must hold a JSON object")
    rules = tuple(
        Rule(
            values=item.get("values", ""),
            pattern=item.get("pattern"),
            attribute=item.get("attribute"),
        )
        for item in data.get("rules", [])
    )
    pack = RulePack(kind=data.get("kind", ""), rules=rules, params=dict(data.get("params") or {}))
    validate_rule_pack(pack)
    return pack


def load_rule_pack(path: Union[str, Path]) -> RulePack:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise errors.IoFailure(f"cannot read rule pack {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.InvalidRulePack(f"{path}: {exc.msg} at line {exc.lineno}") from exc
    return rule_pack_from_json(data)
