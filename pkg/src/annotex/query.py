"""Boolean annotation-query language: parsing, printing, evaluation, rewriting.

Grammar (ET binds tighter than OU; parentheses group; ET/AND and OU/OR are
synonyms, uppercase only):

    query := or
    or    := and { ("OU"|"OR") and }
    and   := atom { ("ET"|"AND") atom }
    atom  := "(" query ")" | "(" STRING "," list ")" | "(" list ")"
    list  := "[" item { "," item } "]"
    item  := STRING | "[" STRING "," INT "]"
    STRING: double-quoted, backslash escapes for '"' and '\\'

A criterion ("attr", [labels...]) matches a record when one of its explicit
objects carries that attribute with every queried label present (subset
semantics; "any" mode relaxes this to a single shared label).  A bare list
(["a", "b"]) is a constrained query: each token is resolved against the fact
base and the query is rewritten into boolean criteria, with the bindings kept
in a trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import errors, model
from .errors import QuerySyntaxError
from .infer import Binding, resolve_token
from .model import ValueEntry, ValueList, labels_of
from .store import StoreLike, as_snapshot


@dataclass(frozen=True)
class Criterion:
    attribute: str
    values: ValueList


@dataclass(frozen=True)
class BareValues:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class And:
    children: tuple["QueryExpr", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["QueryExpr", ...]


QueryExpr = Union[Criterion, BareValues, And, Or]


# -- lexer ---------------------------------------------------------------------

_SIMPLE = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET", ",": "COMMA"}
_KEYWORDS = {"ET": "AND", "AND": "AND", "OU": "OR", "OR": "OR"}
_TOKEN_NAMES = {
    "LPAREN": "'('", "RPAREN": "')'", "LBRACKET": "'['", "RBRACKET": "']'",
    "COMMA": "','", "STRING": "STRING", "INT": "INT",
    "AND": "'ET'", "OR": "'OU'", "EOF": "end of input",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SIMPLE:
            tokens.append(_Token(_SIMPLE[ch], ch, i))
            i += 1
            continue
        if ch == '"':
            start = i
            i += 1
            buf: list[str] = []
            closed = False
            while i < n:
                c = text[i]
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise QuerySyntaxError(
                            "invalid escape; only \\\" and \\\\ are allowed", i, ("STRING",)
                        )
                    buf.append(text[i + 1])
                    i += 2
                    continue
                if c == '"':
                    i += 1
                    closed = True
                    break
                buf.append(c)
                i += 1
            if not closed:
                raise QuerySyntaxError("unterminated string", start, ("'\"'",))
            tokens.append(_Token("STRING", "".join(buf), start))
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            start = i
            i += 1
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(_Token("INT", int(text[start:i]), start))
            continue
        if ch.isalpha():
            start = i
            while i < n and text[i].isalpha():
                i += 1
            word = text[start:i]
            if word in _KEYWORDS:
                tokens.append(_Token(_KEYWORDS[word], word, start))
                continue
            raise QuerySyntaxError(
                f"unknown keyword {word!r}", start, ("'ET'", "'OU'")
            )
        raise QuerySyntaxError(f"unexpected character {ch!r}", i, ())
    tokens.append(_Token("EOF", None, n))
    return tokens


# -- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def expect(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise self.fail((kind,))
        return self.advance()

    def fail(self, expected: tuple[str, ...]) -> QuerySyntaxError:
        token = self.peek()
        names = tuple(_TOKEN_NAMES.get(k, k) for k in expected)
        got = _TOKEN_NAMES.get(token.kind, token.kind)
        return QuerySyntaxError(
            f"expected {' or '.join(names)}, got {got}", token.pos, names
        )

    def parse(self) -> QueryExpr:
        if self.peek().kind == "EOF":
            raise QuerySyntaxError("empty query", 0, ("'('",))
        expr = self.or_expr()
        if self.peek().kind != "EOF":
            raise self.fail(("AND", "OR", "EOF"))
        return expr

    def or_expr(self) -> QueryExpr:
        parts = [self.and_expr()]
        while self.peek().kind == "OR":
            self.advance()
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_expr(self) -> QueryExpr:
        parts = [self.atom()]
        while self.peek().kind == "AND":
            self.advance()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def atom(self) -> QueryExpr:
        self.expect("LPAREN")
        token = self.peek()
        if token.kind == "STRING":
            self.advance()
            if not token.value.strip():
                raise QuerySyntaxError("empty attribute name", token.pos, ("STRING",))
            self.expect("COMMA")
            values = self.value_list()
            self.expect("RPAREN")
            return Criterion(attribute=token.value, values=values)
        if token.kind == "LBRACKET":
            values = self.value_list()
            self.expect("RPAREN")
            return BareValues(labels=labels_of(values))
        if token.kind == "LPAREN":
            expr = self.or_expr()
            self.expect("RPAREN")
            return expr
        raise self.fail(("STRING", "LBRACKET", "LPAREN"))

    def value_list(self) -> ValueList:
        opener = self.expect("LBRACKET")
        entries = [self.item()]
        while self.peek().kind == "COMMA":
            self.advance()
            entries.append(self.item())
        self.expect("RBRACKET")
        seen: set[str] = set()
        for entry in entries:
            if entry.label in seen:
                raise QuerySyntaxError(
                    f"duplicate value label {entry.label!r}", opener.pos, ()
                )
            seen.add(entry.label)
        return tuple(entries)

    def item(self) -> ValueEntry:
        token = self.peek()
        if token.kind == "STRING":
            self.advance()
            if not token.value.strip():
                raise QuerySyntaxError("empty value label", token.pos, ("STRING",))
            return ValueEntry(token.value)
        if token.kind == "LBRACKET":
            self.advance()
            label = self.expect("STRING")
            if not label.value.strip():
                raise QuerySyntaxError("empty value label", label.pos, ("STRING",))
            self.expect("COMMA")
            rank = self.expect("INT")
            self.expect("RBRACKET")
            return ValueEntry(label.value, rank.value)
        raise self.fail(("STRING", "LBRACKET"))


def parse_query(text: str) -> QueryExpr:
    """Parse query text into an AST; raises QuerySyntaxError with the
    0-based offset and the acceptable token kinds."""
    return _Parser(_lex(text)).parse()


def parse_value_list(text: str) -> ValueList:
    """Parse a standalone ["label", ["label", rank], ...] list."""
    parser = _Parser(_lex(text))
    values = parser.value_list()
    parser.expect("EOF")
    return values


# -- printer ---------------------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _print_item(entry: ValueEntry) -> str:
    if entry.rank is None:
        return _quote(entry.label)
    return f"[{_quote(entry.label)}, {entry.rank}]"


def print_value_list(values: ValueList) -> str:
    return "[" + ", ".join(_print_item(v) for v in values) + "]"


def print_query(expr: QueryExpr) -> str:
    """Canonical text; parse(print_query(e)) is structurally e."""
    if isinstance(expr, Criterion):
        return f"({_quote(expr.attribute)}, {print_value_list(expr.values)})"
    if isinstance(expr, BareValues):
        return f"({print_value_list(tuple(ValueEntry(l) for l in expr.labels))})"
    if isinstance(expr, And):
        return "(" + " ET ".join(print_query(c) for c in expr.children) + ")"
    if isinstance(expr, Or):
        return "(" + " OU ".join(print_query(c) for c in expr.children) + ")"
    raise TypeError(f"not a query expression: {expr!r}")


def contains_bare_values(expr: QueryExpr) -> bool:
    if isinstance(expr, BareValues):
        return True
    if isinstance(expr, (And, Or)):
        return any(contains_bare_values(c) for c in expr.children)
    return False


# -- classic evaluation ------------------------------------------------------------

def _criterion_holds(record, crit: Criterion, match: str) -> bool:
    wanted = set(labels_of(crit.values))
    for obj in record.object.explicits:
        if obj.attribute != crit.attribute:
            continue
        present = set(obj.labels())
        ok = wanted <= present if match == "subset" else bool(wanted & present)
        if ok:
            return True
    return False


def eval_classic(expr: QueryExpr, store: StoreLike, match: str = "subset") -> tuple[str, ...]:
    """Evaluate a rewritten/classic query; ids come back sorted.

    A criterion matches a record when a single explicit object carries the
    attribute with all queried labels (``match="any"``: at least one).
    """
    if match not in ("subset", "any"):
        raise ValueError(f"match must be 'subset' or 'any', got {match!r}")
    snap = as_snapshot(store)

    def ev(node: QueryExpr) -> set[str]:
        if isinstance(node, Criterion):
            candidates = snap.records_with_attribute(node.attribute)
            return {
                rid for rid in candidates
                if _criterion_holds(snap.records[rid], node, match)
            }
        if isinstance(node, And):
            result = ev(node.children[0])
            for child in node.children[1:]:
                result &= ev(child)
            return result
        if isinstance(node, Or):
            result = ev(node.children[0])
            for child in node.children[1:]:
                result |= ev(child)
            return result
        raise errors.UnrewrittenBareValues(
            "bare value lists must be rewritten before classic evaluation"
        )

    return tuple(sorted(ev(expr)))


# -- constrained rewriting -----------------------------------------------------------

@dataclass(frozen=True)
class TokenResolution:
    token: str
    bindings: tuple[Binding, ...]
    disposition: str  # "resolved" | "dropped"


@dataclass(frozen=True)
class RewriteTrace:
    """Provenance of a constrained-search rewrite: what each token bound to,
    what the query became, and which tokens were dropped."""

    tokens: tuple[TokenResolution, ...]
    expr: Optional[QueryExpr]
    warnings: tuple[str, ...]


def rewrite_constrained(
    tokens,
    store: StoreLike,
    strict: bool = False,
) -> tuple[Optional[QueryExpr], RewriteTrace]:
    """Rewrite bare tokens into boolean criteria via token resolution.

    Tokens resolving to a single attribute are grouped per attribute into one
    criterion; a token resolving to k > 1 attributes becomes a k-way OU of
    single-token criteria.  Groups are conjoined in order of first token
    occurrence.  Unresolved tokens are dropped with a warning (strict mode
    raises); a rewrite with nothing left yields expr None, which evaluates to
    no results.
    """
    token_list = [t for t in tokens]
    if not token_list:
        raise errors.EmptyTokenList("constrained search needs at least one token")
    ordered: list[str] = []
    for token in token_list:  # exact duplicates resolve identically
        if token not in ordered:
            ordered.append(token)

    resolutions: list[TokenResolution] = []
    warnings: list[str] = []
    grouped: dict[str, list[str]] = {}
    order: list[tuple] = []
    for token in ordered:
        bindings = resolve_token(token, store)
        if not bindings:
            if strict:
                raise errors.UnresolvableToken(
                    f"token {token!r} resolves to no stored fact", token=token
                )
            resolutions.append(TokenResolution(token, (), "dropped"))
            warnings.append(f"token {token!r} resolves to no stored fact; dropped")
            continue
        resolutions.append(TokenResolution(token, bindings, "resolved"))
        attrs: list[str] = []
        for binding in bindings:
            if binding.fact.attribute not in attrs:
                attrs.append(binding.fact.attribute)
        if len(attrs) == 1:
            attr = attrs[0]
            if attr not in grouped:
                grouped[attr] = []
                order.append(("group", attr))
            grouped[attr].append(token)
        else:
            order.append(("fanout", token, tuple(attrs)))

    children: list[QueryExpr] = []
    for entry in order:
        if entry[0] == "group":
            attr = entry[1]
            children.append(Criterion(attr, tuple(ValueEntry(t) for t in grouped[attr])))
        else:
            _, token, attrs = entry
            children.append(Or(tuple(
                Criterion(attr, (ValueEntry(token),)) for attr in attrs
            )))
    expr: Optional[QueryExpr]
    if not children:
        expr = None
    elif len(children) == 1:
        expr = children[0]
    else:
        expr = And(tuple(children))
    return expr, RewriteTrace(tuple(resolutions), expr, tuple(warnings))


def _splice_rewrites(
    expr: QueryExpr,
    store: StoreLike,
    strict: bool,
    resolutions: list[TokenResolution],
    warnings: list[str],
) -> Optional[QueryExpr]:
    """Replace every bare-values node by its rewrite, folding away empties:
    an unresolvable node matches nothing, so it erases a conjunction and
    drops out of a disjunction."""
    if isinstance(expr, Criterion):
        return expr
    if isinstance(expr, BareValues):
        sub, trace = rewrite_constrained(expr.labels, store, strict)
        resolutions.extend(trace.tokens)
        warnings.extend(trace.warnings)
        return sub
    kids = [
        _splice_rewrites(child, store, strict, resolutions, warnings)
        for child in expr.children
    ]
    if isinstance(expr, And):
        if any(kid is None for kid in kids):
            warnings.append("a conjunct became unresolvable; the conjunction matches nothing")
            return None
        return And(tuple(kids))
    survivors = [kid for kid in kids if kid is not None]
    if not survivors:
        return None
    if len(survivors) == 1:
        return survivors[0]
    return Or(tuple(survivors))


def search(
    text: str,
    store: StoreLike,
    strict: bool = False,
    match: str = "subset",
) -> tuple[tuple[str, ...], Optional[RewriteTrace]]:
    """Parse and run a query; constrained queries come back with their trace."""
    expr = parse_query(text)
    if not contains_bare_values(expr):
        return eval_classic(expr, store, match), None
    resolutions: list[TokenResolution] = []
    warnings: list[str] = []
    rewritten = _splice_rewrites(expr, store, strict, resolutions, warnings)
    trace = RewriteTrace(tuple(resolutions), rewritten, tuple(warnings))
    if rewritten is None:
        return (), trace
    return eval_classic(rewritten, store, match), trace


# -- trace rendering ------------------------------------------------------------------

def trace_to_json(trace: RewriteTrace) -> dict:
    return {
        "tokens": [
            {
                "token": res.token,
                "disposition": res.disposition,
                "bindings": [
                    {
                        "attribute": b.fact.attribute,
                        "annotation": b.fact.annotation_id,
                        "values": model.value_list_to_json(b.fact.values),
                        "matched": list(b.matched_labels),
                    }
                    for b in res.bindings
                ],
            }
            for res in trace.tokens
        ],
        "query": print_query(trace.expr) if trace.expr is not None else None,
        "warnings": list(trace.warnings),
    }


def format_trace(trace: RewriteTrace) -> str:
    """Human-readable explanation: per-token bindings with the supporting
    stored value lists, then the canonical rewritten query."""
    lines = []
    for res in trace.tokens:
        if res.disposition == "dropped":
            lines.append(f"token {_quote(res.token)}: no stored fact, dropped")
            continue
        shown = "; ".join(
            f"{_quote(b.fact.attribute)} = {print_value_list(b.fact.values)} via {b.fact.annotation_id}"
            for b in res.bindings
        )
        lines.append(f"token {_quote(res.token)}: {shown}")
    if trace.expr is not None:
        lines.append(f"rewritten: {print_query(trace.expr)}")
    else:
        lines.append("rewritten: nothing resolvable")
    for warning in trace.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)
