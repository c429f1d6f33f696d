"""Knowledge-graph export: triples, vocabulary, serialization.

Language definitions become class/subclass triples and connector-rule
individuals; models become individuals wired together with a closed set
of object properties. Serialization is canonical end to end: N-Triples
output is one sorted line per triple, so equal triple sets produce
byte-identical files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Union

from .core import (
    GopprrError,
    InvalidInputError,
    MetaKind,
    MetaModel,
    Model,
    validate_metamodel,
    validate_model,
)

SE_BASE = "http://www.zkhoneycomb.com/formats/metagInOwl#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDFS_SUBCLASS_OF = RDFS_NS + "subClassOf"
OWL_CLASS = OWL_NS + "Class"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"
OWL_ANNOTATION_PROPERTY = OWL_NS + "AnnotationProperty"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_BOOLEAN = XSD_NS + "boolean"

_ABSOLUTE_IRI_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")


class NTriplesSyntaxError(GopprrError):
    """A line of N-Triples input could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"N-Triples syntax error at line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Iri:
    """An absolute IRI term."""

    value: str

    def __post_init__(self):
        if not _ABSOLUTE_IRI_RE.match(self.value):
            raise ValueError(f"IRI must be absolute: {self.value!r}")


@dataclass(frozen=True)
class TypedLiteral:
    """A literal term with an explicit datatype IRI."""

    lexical: str
    datatype: str = XSD_STRING


Term = Union[Iri, TypedLiteral]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def sort_key(self) -> tuple[str, str, str]:
        return (serialize_term(self.subject), serialize_term(self.predicate), serialize_term(self.object))


@dataclass(frozen=True)
class TripleSet:
    """A duplicate-free set of triples in canonical (sorted) order."""

    triples: tuple[Triple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(sorted(set(self.triples), key=Triple.sort_key)))

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in set(self.triples)

    def without(self, triple: Triple) -> "TripleSet":
        return TripleSet(tuple(t for t in self.triples if t != triple))


@dataclass(frozen=True)
class Vocabulary:
    """The closed predicate and class vocabulary of exports.

    The base namespace defaults to the ``se`` prefix IRI and can be
    overridden, moving every minted class, individual and predicate IRI
    with it.
    """

    base: str = SE_BASE

    #: Instance-to-instance predicates declared as owl:ObjectProperty.
    OBJECT_PROPERTIES = (
        "connect",
        "graphIncludingConnector",
        "graphIncludingObject",
        "graphIncludingRelationship",
        "hasProperty",
        "linkFromRelationship",
        "linkObjectAndPoint",
        "linkRelationshipAndRole",
        "linkToObject",
        "roleBindingObject",
        "roleBindingPoint",
    )
    ANNOTATION_PROPERTIES = ("iconPath",)
    DATA_PROPERTIES = ("hasValue", "modelIconPath")

    def term(self, local_name: str) -> Iri:
        return Iri(self.base + local_name)

    def class_iri(self, kind: MetaKind) -> Iri:
        return self.term(kind.value)

    def type_iri(self, type_name: str) -> Iri:
        return self.term(type_name)

    def individual_iri(self, type_name: str, instance_id: str) -> Iri:
        return self.term(f"{type_name}_{instance_id}")

    def connection_connector_iris(self, relationship_id: str) -> tuple[Iri, Iri]:
        """IRIs of the start and end connector individuals of a connection."""
        return (
            self.individual_iri("Connector", f"{relationship_id}_start"),
            self.individual_iri("Connector", f"{relationship_id}_end"),
        )

    # Predicate shorthands.
    @property
    def graph_including_object(self) -> Iri:
        return self.term("graphIncludingObject")

    @property
    def graph_including_relationship(self) -> Iri:
        return self.term("graphIncludingRelationship")

    @property
    def graph_including_connector(self) -> Iri:
        return self.term("graphIncludingConnector")

    @property
    def link_object_and_point(self) -> Iri:
        return self.term("linkObjectAndPoint")

    @property
    def link_relationship_and_role(self) -> Iri:
        return self.term("linkRelationshipAndRole")

    @property
    def has_property(self) -> Iri:
        return self.term("hasProperty")

    @property
    def link_from_relationship(self) -> Iri:
        return self.term("linkFromRelationship")

    @property
    def link_to_object(self) -> Iri:
        return self.term("linkToObject")

    @property
    def connect(self) -> Iri:
        return self.term("connect")

    @property
    def role_binding_object(self) -> Iri:
        return self.term("roleBindingObject")

    @property
    def role_binding_point(self) -> Iri:
        return self.term("roleBindingPoint")

    @property
    def icon_path(self) -> Iri:
        return self.term("iconPath")

    @property
    def has_value(self) -> Iri:
        return self.term("hasValue")

    @property
    def model_icon_path(self) -> Iri:
        return self.term("modelIconPath")

    def closed_predicates(self) -> frozenset[str]:
        """All predicate IRIs exports may use, typing and subclassing included."""
        locals_ = self.OBJECT_PROPERTIES + self.ANNOTATION_PROPERTIES + self.DATA_PROPERTIES
        return frozenset({self.base + name for name in locals_} | {RDF_TYPE, RDFS_SUBCLASS_OF})


DEFAULT_VOCABULARY = Vocabulary()


def string_literal(text: str) -> TypedLiteral:
    return TypedLiteral(text, XSD_STRING)


def value_literal(value) -> TypedLiteral:
    """Map an in-memory property value onto its typed literal."""
    if isinstance(value, bool):
        return TypedLiteral("true" if value else "false", XSD_BOOLEAN)
    if isinstance(value, int):
        return TypedLiteral(str(value), XSD_INTEGER)
    if isinstance(value, Decimal):
        return TypedLiteral(str(value), XSD_DECIMAL)
    return TypedLiteral(str(value), XSD_STRING)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def export_metamodel(mm: MetaModel, vocab: Vocabulary = DEFAULT_VOCABULARY) -> TripleSet:
    """Transform a language definition into its knowledge-graph triples.

    Emits the seven kind classes and the property vocabulary, one
    subclass triple per declared type, an iconPath annotation per type
    carrying concrete syntax, and one individual per connector rule with
    its relationship, target object, role binding and optional point.
    """
    report = validate_metamodel(mm)
    if not report.ok:
        raise InvalidInputError("metamodel fails validation", report)

    triples: list[Triple] = []
    rdf_type = Iri(RDF_TYPE)
    subclass_of = Iri(RDFS_SUBCLASS_OF)

    for kind in MetaKind:
        triples.append(Triple(vocab.class_iri(kind), rdf_type, Iri(OWL_CLASS)))
    for name in vocab.OBJECT_PROPERTIES:
        triples.append(Triple(vocab.term(name), rdf_type, Iri(OWL_OBJECT_PROPERTY)))
    for name in vocab.ANNOTATION_PROPERTIES:
        triples.append(Triple(vocab.term(name), rdf_type, Iri(OWL_ANNOTATION_PROPERTY)))
    for name in vocab.DATA_PROPERTIES:
        triples.append(Triple(vocab.term(name), rdf_type, Iri(OWL_DATATYPE_PROPERTY)))

    declared = (
        (MetaKind.GRAPH, mm.graph_types),
        (MetaKind.OBJECT, mm.object_types),
        (MetaKind.POINT, mm.point_types),
        (MetaKind.RELATIONSHIP, mm.relationship_types),
        (MetaKind.ROLE, mm.role_types),
        (MetaKind.PROPERTY, mm.property_types),
    )
    for kind, decls in declared:
        for decl in decls:
            triples.append(Triple(vocab.type_iri(decl.name), subclass_of, vocab.class_iri(kind)))
            if decl.icon_path is not None:
                triples.append(Triple(vocab.type_iri(decl.name), vocab.icon_path, string_literal(decl.icon_path)))

    for conn in mm.connectors:
        rule = vocab.individual_iri("Connector", conn.id)
        triples.append(Triple(rule, rdf_type, vocab.class_iri(MetaKind.CONNECTOR)))
        triples.append(Triple(rule, vocab.link_from_relationship, vocab.type_iri(conn.relationship_type)))
        triples.append(Triple(rule, vocab.link_to_object, vocab.type_iri(conn.object_type)))
        triples.append(Triple(rule, vocab.role_binding_object, vocab.type_iri(conn.role_type)))
        if conn.point_type is not None:
            triples.append(Triple(rule, vocab.role_binding_point, vocab.type_iri(conn.point_type)))

    return TripleSet(tuple(triples))


def export_model(mm: MetaModel, m: Model, vocab: Vocabulary = DEFAULT_VOCABULARY) -> TripleSet:
    """Transform a model into individuals linked by the closed vocabulary.

    Each connection becomes two connector individuals (start and end),
    members of the graph, each linked to the relationship individual,
    the endpoint object, the bound role and the optionally bound point;
    a single ``connect`` triple records the direction.
    """
    report = validate_model(mm, m)
    if not report.ok:
        raise InvalidInputError("model fails validation", report)

    triples: list[Triple] = []
    rdf_type = Iri(RDF_TYPE)

    graph = vocab.individual_iri(m.graph_type, m.graph_id)
    triples.append(Triple(graph, rdf_type, vocab.type_iri(m.graph_type)))

    instance_iris: dict[str, Iri] = {m.graph_id: graph}
    for o in m.objects:
        iri = vocab.individual_iri(o.type_name, o.id)
        instance_iris[o.id] = iri
        triples.append(Triple(iri, rdf_type, vocab.type_iri(o.type_name)))
        triples.append(Triple(graph, vocab.graph_including_object, iri))
    for r in m.relationships:
        iri = vocab.individual_iri(r.type_name, r.id)
        instance_iris[r.id] = iri
        triples.append(Triple(iri, rdf_type, vocab.type_iri(r.type_name)))
        triples.append(Triple(graph, vocab.graph_including_relationship, iri))
    for p in m.points:
        iri = vocab.individual_iri(p.type_name, p.id)
        instance_iris[p.id] = iri
        triples.append(Triple(iri, rdf_type, vocab.type_iri(p.type_name)))
        triples.append(Triple(instance_iris[p.owner], vocab.link_object_and_point, iri))
    for ro in m.roles:
        iri = vocab.individual_iri(ro.type_name, ro.id)
        instance_iris[ro.id] = iri
        triples.append(Triple(iri, rdf_type, vocab.type_iri(ro.type_name)))
        triples.append(Triple(instance_iris[ro.owner], vocab.link_relationship_and_role, iri))
    for pv in m.property_values:
        iri = vocab.individual_iri(pv.type_name, pv.id)
        triples.append(Triple(iri, rdf_type, vocab.type_iri(pv.type_name)))
        triples.append(Triple(instance_iris[pv.owner], vocab.has_property, iri))
        triples.append(Triple(iri, vocab.has_value, value_literal(pv.value)))

    for conn in m.connections:
        rel_iri = instance_iris[conn.relationship]
        start_iri, end_iri = vocab.connection_connector_iris(conn.relationship)
        for conn_iri, binding in ((start_iri, conn.start), (end_iri, conn.end)):
            triples.append(Triple(conn_iri, rdf_type, vocab.class_iri(MetaKind.CONNECTOR)))
            triples.append(Triple(graph, vocab.graph_including_connector, conn_iri))
            triples.append(Triple(conn_iri, vocab.link_from_relationship, rel_iri))
            triples.append(Triple(conn_iri, vocab.link_to_object, instance_iris[binding.endpoint_object]))
            triples.append(Triple(conn_iri, vocab.role_binding_object, instance_iris[binding.role]))
            if binding.endpoint_point is not None:
                triples.append(Triple(conn_iri, vocab.role_binding_point, instance_iris[binding.endpoint_point]))
        triples.append(Triple(start_iri, vocab.connect, end_iri))

    for ident, path in m.icon_overrides.items():
        triples.append(Triple(instance_iris[ident], vocab.model_icon_path, string_literal(path)))

    return TripleSet(tuple(triples))


# ---------------------------------------------------------------------------
# N-Triples
# ---------------------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


_UNESCAPE_RE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|[tbnrf\"'\\])")
_UNESCAPE_MAP = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape_literal(text: str) -> str:
    def sub(match: re.Match) -> str:
        body = match.group(1)
        if body[0] in "uU":
            return chr(int(body[1:], 16))
        return _UNESCAPE_MAP[body]

    return _UNESCAPE_RE.sub(sub, text)


def serialize_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if term.datatype == XSD_STRING:
        return f'"{_escape_literal(term.lexical)}"'
    return f'"{_escape_literal(term.lexical)}"^^<{term.datatype}>'


def serialize_ntriples(ts: TripleSet) -> str:
    """Canonical N-Triples: sorted lines, LF endings, no blank nodes."""
    lines = [
        f"{serialize_term(t.subject)} {serialize_term(t.predicate)} {serialize_term(t.object)} ."
        for t in ts
    ]
    return "".join(line + "\n" for line in lines)


_NT_LINE_RE = re.compile(
    r"^<(?P<s>[^<>\s]+)>\s+<(?P<p>[^<>\s]+)>\s+"
    r"(?:<(?P<o>[^<>\s]+)>|\"(?P<lex>(?:[^\"\\]|\\.)*)\"(?:\^\^<(?P<dt>[^<>\s]+)>)?)"
    r"\s*\.\s*$"
)


def parse_ntriples(text: str) -> TripleSet:
    """Parse N-Triples text; input order and surrounding whitespace are free."""
    triples: list[Triple] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _NT_LINE_RE.match(line)
        if match is None:
            raise NTriplesSyntaxError(f"cannot parse {line!r}", lineno)
        try:
            subject = Iri(match.group("s"))
            predicate = Iri(match.group("p"))
            if match.group("o") is not None:
                obj: Term = Iri(match.group("o"))
            else:
                datatype = match.group("dt") or XSD_STRING
                obj = TypedLiteral(_unescape_literal(match.group("lex")), datatype)
        except ValueError as exc:
            raise NTriplesSyntaxError(str(exc), lineno) from exc
        triples.append(Triple(subject, predicate, obj))
    return TripleSet(tuple(triples))


# ---------------------------------------------------------------------------
# Turtle (write-only, for human reading)
# ---------------------------------------------------------------------------

_PNAME_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _turtle_prefixes(vocab: Vocabulary) -> list[tuple[str, str]]:
    return sorted(
        [("owl", OWL_NS), ("rdf", RDF_NS), ("rdfs", RDFS_NS), ("se", vocab.base), ("xsd", XSD_NS)]
    )


def _turtle_term(term: Term, prefixes: list[tuple[str, str]]) -> str:
    if isinstance(term, Iri):
        if term.value == RDF_TYPE:
            return "a"
        for prefix, ns in prefixes:
            local = term.value[len(ns):]
            if term.value.startswith(ns) and _PNAME_LOCAL_RE.match(local):
                return f"{prefix}:{local}"
        return f"<{term.value}>"
    if term.datatype == XSD_STRING:
        return f'"{_escape_literal(term.lexical)}"'
    return f'"{_escape_literal(term.lexical)}"^^{_turtle_term(Iri(term.datatype), prefixes)}'


def serialize_turtle(ts: TripleSet, vocab: Vocabulary = DEFAULT_VOCABULARY) -> str:
    """Turtle output grouped by subject with sorted predicates and objects."""
    prefixes = _turtle_prefixes(vocab)
    out = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in prefixes]

    by_subject: dict[str, dict[str, list[Term]]] = {}
    subject_terms: dict[str, Iri] = {}
    for t in ts:
        s_key = serialize_term(t.subject)
        subject_terms[s_key] = t.subject
        by_subject.setdefault(s_key, {}).setdefault(t.predicate.value, []).append(t.object)

    for s_key in sorted(by_subject):
        out.append("")
        subject = _turtle_term(subject_terms[s_key], prefixes)
        pred_lines = []
        for pred in sorted(by_subject[s_key]):
            objects = sorted(by_subject[s_key][pred], key=serialize_term)
            rendered = ", ".join(_turtle_term(o, prefixes) for o in objects)
            pred_lines.append(f"{_turtle_term(Iri(pred), prefixes)} {rendered}")
        out.append(f"{subject} " + " ;\n    ".join(pred_lines) + " .")

    return "".join(line + "\n" for line in out)
