"""annotex: an annotation knowledge base with explicitation by inference.

Annotations attach (attribute, values) content units to tiered documents
(sources, notices, and annotations themselves).  Implicit units — missing
their attribute or their values — are completed by confronting them with the
explicit fact base, and searches may be classic boolean queries or bare value
lists that get rewritten into criteria through that same inference.
"""

from . import errors
from .model import (
    AnnotationContext,
    AnnotationObject,
    AnnotationRecord,
    AnnotatorProfile,
    ExplicitObject,
    ImplicitObject,
    TargetRef,
    ValueEntry,
    ValidationReport,
    assemble_annotation_object,
    make_explicit_object,
    make_implicit_object,
    make_record,
    make_value_list,
    validate_record,
)
from .store import DocumentInfo, Fact, Store, StoreSnapshot, load_store, save_store
from .infer import (
    Binding,
    ExplicitationResult,
    explicitate_attribute,
    explicitate_object,
    explicitate_values,
    resolve_token,
)
from .query import (
    And,
    BareValues,
    Criterion,
    Or,
    RewriteTrace,
    eval_classic,
    parse_query,
    print_query,
    rewrite_constrained,
    search,
)
from .semantic import RulePack, RulePackRegistry, apply_semantic_function, default_packs

__version__ = "0.1.0"

__all__ = [
    "AnnotationContext", "AnnotationObject", "AnnotationRecord", "AnnotatorProfile",
    "ExplicitObject", "ImplicitObject", "TargetRef", "ValueEntry", "ValidationReport",
    "assemble_annotation_object", "make_explicit_object", "make_implicit_object",
    "make_record", "make_value_list", "validate_record",
    "DocumentInfo", "Fact", "Store", "StoreSnapshot", "load_store", "save_store",
    "Binding", "ExplicitationResult", "explicitate_attribute", "explicitate_object",
    "explicitate_values", "resolve_token",
    "And", "BareValues", "Criterion", "Or", "RewriteTrace",
    "eval_classic", "parse_query", "print_query", "rewrite_constrained", "search",
    "RulePack", "RulePackRegistry", "apply_semantic_function", "default_packs",
    "errors",
]
