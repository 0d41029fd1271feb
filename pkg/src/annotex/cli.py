"""Command-line workbench around the annotation store.

    annotex --store ./mystore init
    annotex ingest --id doc1 --tier primary --title "Rapport"
    annotex annotate --target doc1 --attr souligner --values "stratégie,développement"
    annotex annotate --target doc1 --function indexer --content "..."
    annotex search '("auteur", ["Alain Juillet"])' --explain
    annotex explicitate --values '["pertinent"]'
    annotex serve --port 8080

Exit codes: 0 success, 1 I/O failure, 2 user error.  The store path comes
from --store or the ANNOTEX_STORE environment variable.  ``--format json``
prints the same bytes the HTTP API would return for the equivalent request.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import errors, fixtures, model, query, semantic
from .model import AnnotationContext, AnnotatorProfile, TargetRef
from .service import api_json, explicitate_response, search_response
from .store import DocumentInfo, Store, load_store, save_store

DEFAULT_STORE = "./annotex-store"

EXIT_OK = 0
EXIT_IO = 1
EXIT_USER = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annotex", description=__doc__.splitlines()[0])
    parser.add_argument("--store", default=None, help="store directory (env ANNOTEX_STORE)")
    parser.add_argument("--format", choices=("human", "json"), default="human",
                        help="output format")
    # the shared flags are accepted on either side of the subcommand;
    # SUPPRESS keeps a subcommand-side absence from clobbering a global value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("human", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    add_parser("init", help="create an empty store")

    p = add_parser("ingest", help="register a document")
    p.add_argument("--id", required=True)
    p.add_argument("--tier", choices=model.DOCUMENT_TIERS, default="primary")
    p.add_argument("--title", default="")
    p.add_argument("--origin", default=None)

    p = add_parser("profile", help="register an annotator profile")
    p.add_argument("--id", required=True)
    p.add_argument("--name", default="")
    p.add_argument("--role", choices=model.ANNOTATOR_ROLES, default="autre")

    p = add_parser("annotate", help="attach an annotation to a target")
    p.add_argument("--target", required=True, help="document or annotation id")
    p.add_argument("--tier", choices=model.TIERS, default=None,
                   help="target tier (resolved from the id when omitted)")
    p.add_argument("--attr", default=None, help="attribute name")
    p.add_argument("--values", default=None,
                   help='comma-separated labels, or a ["label", ["label", rank]] list')
    p.add_argument("--function", choices=semantic.KINDS, default=None,
                   help="derive the object by semantic function instead")
    p.add_argument("--content", default=None, help="content the function works on")
    p.add_argument("--selection", default=None, metavar="START:END",
                   help="character span of the selection inside the content")
    p.add_argument("--pack", default=None, help="JSON rule-pack file overriding the default")
    p.add_argument("--id", dest="annotation_id", default=None, help="explicit annotation id")
    p.add_argument("--annotator", default="cli")
    p.add_argument("--context", choices=model.CONTEXT_KINDS, default="interprétation")
    p.add_argument("--note", default="")
    p.add_argument("--semantic", choices=semantic.KINDS, default=None,
                   help="semantic function recorded for direct --attr/--values input")
    p.add_argument("--objective", default="")
    p.add_argument("--signification", default="")
    p.add_argument("--operation", default="")
    p.add_argument("--dim", action="append", default=[], metavar="KEY=TEXT",
                   help="dimension metadata entry (repeatable)")

    p = add_parser("search", help="run a classic or constrained query")
    p.add_argument("query", help="query text")
    p.add_argument("--explain", action="store_true", help="print the rewrite trace")
    p.add_argument("--strict", action="store_true", help="fail on unresolvable tokens")
    p.add_argument("--match", choices=("subset", "any"), default="subset")

    p = add_parser("explicitate", help="infer the missing half of an implicit object")
    p.add_argument("--attr", default=None)
    p.add_argument("--values", default=None)
    p.add_argument("--scope", default=None, help="restrict to facts on this target id")
    p.add_argument("--scope-tier", choices=model.TIERS, default=None)
    p.add_argument("--match", choices=("any", "all"), default="any")

    p = add_parser("fixture", help="materialize a built-in demo store")
    p.add_argument("name", choices=sorted(fixtures.FIXTURES))
    p.add_argument("--force", action="store_true", help="overwrite a non-empty store")

    p = add_parser("import", help="merge another store directory into this one")
    p.add_argument("source")

    p = add_parser("export", help="write the store to another directory")
    p.add_argument("destination")

    p = add_parser("delete", help="delete an annotation")
    p.add_argument("id")

    p = add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui", default=None, help="directory of static UI files to serve")

    return parser


def _store_path(args) -> Path:
    return Path(args.store or os.environ.get("ANNOTEX_STORE") or DEFAULT_STORE)


def _parse_values(text: str):
    if text.strip().startswith("["):
        return query.parse_value_list(text)
    labels = [part.strip() for part in text.split(",")]
    return model.make_value_list([label for label in labels if label])


def _resolve_target(store: Store, target_id: str, tier: str | None) -> TargetRef:
    if tier is not None:
        return TargetRef(tier, target_id)
    snap = store.snapshot()
    if target_id in snap.documents:
        return TargetRef(snap.documents[target_id].tier, target_id)
    if target_id in snap.records:
        return TargetRef("tertiary", target_id)
    raise errors.UnresolvableTarget(f"no document or annotation {target_id!r}; pass --tier")


def _emit(args, data: dict, human_lines) -> None:
    if args.format == "json":
        sys.stdout.buffer.write(api_json(data) + b"\n")
    else:
        for line in human_lines:
            print(line)


def cmd_init(args) -> int:
    save_store(Store(), _store_path(args))
    print(f"initialized empty store at {_store_path(args)}")
    return EXIT_OK


def cmd_ingest(args, store: Store) -> int:
    store.add_document(DocumentInfo(id=args.id, tier=args.tier, title=args.title,
                                    origin=args.origin))
    save_store(store, _store_path(args))
    _emit(args, {"id": args.id, "version": store.version}, [args.id])
    return EXIT_OK


def cmd_profile(args, store: Store) -> int:
    store.add_profile(AnnotatorProfile(id=args.id, name=args.name, role=args.role))
    save_store(store, _store_path(args))
    _emit(args, {"id": args.id, "version": store.version}, [args.id])
    return EXIT_OK


def cmd_annotate(args, store: Store) -> int:
    target = _resolve_target(store, args.target, args.tier)
    if args.function:
        if not args.content:
            raise errors.NoRuleFired("--function needs --content")
        selection = None
        if args.selection:
            start, _, end = args.selection.partition(":")
            selection = (int(start), int(end))
        pack = semantic.load_rule_pack(args.pack) if args.pack else None
        obj = semantic.apply_semantic_function(args.function, args.content,
                                               selection=selection, pack=pack)
        function_kind = args.function
    else:
        if args.attr is None and args.values is None:
            raise errors.BothHalvesEmpty(
                "give --attr and/or --values, or --function with --content"
            )
        values = _parse_values(args.values) if args.values is not None else None
        unit = model.make_implicit_object(attribute=args.attr, values=values)
        if isinstance(unit, model.ExplicitObject):
            obj = model.assemble_annotation_object(explicits=[unit])
        else:
            obj = model.assemble_annotation_object(implicits=[unit])
        function_kind = args.semantic or "indexer"
    dimensions = {}
    for item in args.dim:
        key, _, text = item.partition("=")
        dimensions[key] = text
    record = model.make_record(
        id=args.annotation_id or store.allocate_id(),
        context=AnnotationContext(kind=args.context, note=args.note),
        target=target,
        annotator=args.annotator,
        semantic_function=function_kind,
        object=obj,
        operation_type=args.operation,
        objective=args.objective,
        signification=args.signification,
        dimensions=dimensions,
    )
    store.add_annotation(record)
    save_store(store, _store_path(args))
    _emit(args, {"id": record.id, "version": store.version}, [record.id])
    return EXIT_OK


def cmd_search(args, store: Store) -> int:
    if args.format == "json":
        body = search_response(store, args.query, strict=args.strict, match=args.match)
        sys.stdout.buffer.write(api_json(body) + b"\n")
        return EXIT_OK
    ids, trace = query.search(args.query, store, strict=args.strict, match=args.match)
    if args.explain and trace is not None:
        print(query.format_trace(trace))
    for annotation_id in ids:
        print(annotation_id)
    return EXIT_OK


def cmd_explicitate(args, store: Store) -> int:
    request: dict = {"match": args.match}
    if args.attr is not None:
        request["attribute"] = args.attr
    if args.values is not None:
        request["values"] = model.value_list_to_json(_parse_values(args.values))
    if args.scope:
        scope = _resolve_target(store, args.scope, args.scope_tier)
        request["scope"] = {"tier": scope.tier, "id": scope.id}
    body = explicitate_response(store, request)
    lines = []
    for candidate in body["candidates"]:
        shown = query.print_value_list(model.value_list_from_json(candidate["values"]))
        lines.append(f'{candidate["attribute"]} {shown} via {candidate["binding"]["annotation"]}')
    if not body["candidates"]:
        lines.append("(unresolved)")
    _emit(args, body, lines)
    return EXIT_OK


def cmd_fixture(args, store: Store) -> int:
    if store.snapshot().records and not args.force:
        raise errors.DuplicateId("store is not empty; use --force to overwrite")
    built = fixtures.FIXTURES[args.name]()
    save_store(built, _store_path(args))
    _emit(args, {"fixture": args.name, "annotations": len(built.snapshot().records)},
          [f"{args.name}: {len(built.snapshot().records)} annotations"])
    return EXIT_OK


def cmd_import(args, store: Store) -> int:
    source = load_store(args.source)
    snap = source.snapshot()
    skipped = 0
    for doc in snap.documents.values():
        try:
            store.add_document(doc)
        except errors.DuplicateId:
            skipped += 1
    for profile in snap.profiles.values():
        try:
            store.add_profile(profile)
        except errors.DuplicateId:
            skipped += 1
    added = 0
    for record in snap.records.values():
        try:
            store.add_annotation(record)
            added += 1
        except errors.DuplicateId:
            skipped += 1
    save_store(store, _store_path(args))
    _emit(args, {"imported": added, "skipped": skipped, "version": store.version},
          [f"imported {added} annotations ({skipped} duplicates skipped)"])
    return EXIT_OK


def cmd_export(args, store: Store) -> int:
    save_store(store, args.destination)
    print(f"exported to {args.destination}")
    return EXIT_OK


def cmd_delete(args, store: Store) -> int:
    store.delete_annotation(args.id)
    save_store(store, _store_path(args))
    _emit(args, {"deleted": args.id, "version": store.version}, [f"deleted {args.id}"])
    return EXIT_OK


def cmd_serve(args, store: Store) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(store, ui_dir=args.ui, save_to=str(_store_path(args)))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "profile": cmd_profile,
    "annotate": cmd_annotate,
    "search": cmd_search,
    "explicitate": cmd_explicitate,
    "fixture": cmd_fixture,
    "import": cmd_import,
    "export": cmd_export,
    "delete": cmd_delete,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "init":
            return cmd_init(args)
        store = load_store(_store_path(args))
        return _COMMANDS[args.command](args, store)
    except errors.QuerySyntaxError as exc:
        print(f"error: {exc.code}: {exc.message} at position {exc.position}", file=sys.stderr)
        if getattr(args, "query", None) is not None:
            print(f"  {args.query}", file=sys.stderr)
            print("  " + " " * exc.position + "^", file=sys.stderr)
        return EXIT_USER
    except (errors.IoFailure, errors.CorruptStoreFile) as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return EXIT_IO
    except errors.AnnotexError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return EXIT_USER
    except OSError as exc:
        print(f"error: IoFailure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
