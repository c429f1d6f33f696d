"""GOPPRR metamodeling kernel.

Validates modeling-language definitions and instance models against
connector constraints, exports both as knowledge-graph triples, and
verifies exported models for completeness (membership, structure,
properties) and logic (connections and directions) with a conjunctive
pattern query engine.
"""

from .core import (
    Connection,
    Connector,
    ConnectorArithmetic,
    ConnectorBinding,
    DanglingRelationshipError,
    GopprrError,
    InvalidInputError,
    MetaKind,
    MetaModel,
    Model,
    ObjectInst,
    ObjectTypeDef,
    PointInst,
    PropertySlot,
    PropertyValue,
    RelationshipInst,
    RelationshipTypeDef,
    RoleInst,
    TypeDef,
    UnknownRelationshipError,
    ValidationReport,
    Violation,
    connection_endpoints,
    connector_arithmetic,
    count_summary,
    validate_metamodel,
    validate_model,
)
from .dsl import (
    DocumentSchemaError,
    DocumentSemanticError,
    DocumentSyntaxError,
    emit_metamodel,
    emit_model,
    parse_metamodel,
    parse_model,
)
from .kgexport import (
    Iri,
    NTriplesSyntaxError,
    Triple,
    TripleSet,
    TypedLiteral,
    Vocabulary,
    export_metamodel,
    export_model,
    parse_ntriples,
    serialize_ntriples,
    serialize_turtle,
)
from .query import (
    BindingSet,
    CompletenessReport,
    LogicReport,
    MalformedPatternError,
    Pattern,
    TriplePattern,
    Var,
    VerificationDiff,
    completeness_report,
    logic_report,
    match,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "BindingSet",
    "CompletenessReport",
    "Connection",
    "Connector",
    "ConnectorArithmetic",
    "ConnectorBinding",
    "DanglingRelationshipError",
    "DocumentSchemaError",
    "DocumentSemanticError",
    "DocumentSyntaxError",
    "GopprrError",
    "InvalidInputError",
    "Iri",
    "LogicReport",
    "MalformedPatternError",
    "MetaKind",
    "MetaModel",
    "Model",
    "NTriplesSyntaxError",
    "ObjectInst",
    "ObjectTypeDef",
    "Pattern",
    "PointInst",
    "PropertySlot",
    "PropertyValue",
    "RelationshipInst",
    "RelationshipTypeDef",
    "RoleInst",
    "Triple",
    "TriplePattern",
    "TripleSet",
    "TypeDef",
    "TypedLiteral",
    "UnknownRelationshipError",
    "ValidationReport",
    "Var",
    "VerificationDiff",
    "Violation",
    "Vocabulary",
    "completeness_report",
    "connection_endpoints",
    "connector_arithmetic",
    "count_summary",
    "emit_metamodel",
    "emit_model",
    "export_metamodel",
    "export_model",
    "logic_report",
    "match",
    "parse_metamodel",
    "parse_model",
    "parse_ntriples",
    "serialize_ntriples",
    "serialize_turtle",
    "validate_metamodel",
    "validate_model",
    "verify",
]
