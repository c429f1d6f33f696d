"""Data model and structural validation for GOPPRR modeling languages.

Two layers live here: language definitions (typed Graph/Object/Point/
Relationship/Role/Property declarations plus connector constraints) and
instance models conforming to them. Values are immutable after
construction and every operation is a pure function, so everything is
safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import NamedTuple, Optional, Union

TYPE_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
INSTANCE_ID_RE = re.compile(r"[A-Za-z0-9_]+\Z")

#: Value datatypes a property slot may declare.
VALUE_DATATYPES = ("string", "integer", "decimal", "boolean")

PropertyLiteral = Union[str, int, bool, Decimal]


class GopprrError(Exception):
    """Base class for all errors raised by this package."""


class UnknownRelationshipError(GopprrError):
    """The requested id is not a relationship instance of the model."""


class DanglingRelationshipError(GopprrError):
    """The relationship instance participates in no connection."""


class InvalidInputError(GopprrError):
    """An operation was given input that fails its validation precondition."""

    def __init__(self, message: str, report: Optional["ValidationReport"] = None):
        super().__init__(message)
        self.report = report


class MetaKind(str, Enum):
    """The six GOPPRR kinds plus the Connector extension kind."""

    GRAPH = "Graph"
    OBJECT = "Object"
    POINT = "Point"
    RELATIONSHIP = "Relationship"
    ROLE = "Role"
    PROPERTY = "Property"
    CONNECTOR = "Connector"


#: Kinds that may own property slots (everything except Property and Connector).
NONPROPERTY_KINDS = frozenset(
    {MetaKind.GRAPH, MetaKind.OBJECT, MetaKind.POINT, MetaKind.RELATIONSHIP, MetaKind.ROLE}
)

#: Column order used by count tables (connector counts are reported separately).
COUNT_TABLE_KINDS = (
    MetaKind.GRAPH,
    MetaKind.OBJECT,
    MetaKind.POINT,
    MetaKind.PROPERTY,
    MetaKind.RELATIONSHIP,
    MetaKind.ROLE,
)

#: Type names that would collide with the kind class names in exports.
RESERVED_TYPE_NAMES = frozenset(k.value for k in MetaKind)


def is_type_name(name: str) -> bool:
    return bool(TYPE_NAME_RE.match(name))


def is_instance_id(ident: str) -> bool:
    return bool(INSTANCE_ID_RE.match(ident))


# ---------------------------------------------------------------------------
# Language definitions (the meta level)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeDef:
    """A plain named type declaration (graph, point, role or property type)."""

    name: str
    icon_path: Optional[str] = None


@dataclass(frozen=True)
class ObjectTypeDef:
    """An object type: owned port types plus an optional decomposition target."""

    name: str
    point_types: frozenset[str] = frozenset()
    decomposes_to: Optional[str] = None
    # When True the decomposition link is an "explore" link; validation
    # semantics are identical either way.
    explore: bool = False
    icon_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "point_types", frozenset(self.point_types))


@dataclass(frozen=True)
class RelationshipTypeDef:
    """A relationship type; a valid one declares exactly two role types."""

    name: str
    role_types: tuple[str, ...] = ()
    icon_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "role_types", tuple(self.role_types))

    @property
    def start_role(self) -> str:
        return self.role_types[0]

    @property
    def end_role(self) -> str:
        return self.role_types[1]


@dataclass(frozen=True)
class Connector:
    """One licensed binding: a role of a relationship tied to an object target.

    When ``point_type`` is set the binding targets that port of
    ``object_type`` rather than the object itself.
    """

    id: str
    relationship_type: str
    role_type: str
    object_type: str
    point_type: Optional[str] = None


@dataclass(frozen=True, eq=True)
class MetaModel:
    """A modeling-language definition.

    Declaration sets are canonicalized (deduplicated order, sorted by name
    or id) on construction so that structural equality is independent of
    the order the caller supplied.
    """

    language_name: str
    graph_types: tuple[TypeDef, ...] = ()
    object_types: tuple[ObjectTypeDef, ...] = ()
    point_types: tuple[TypeDef, ...] = ()
    relationship_types: tuple[RelationshipTypeDef, ...] = ()
    role_types: tuple[TypeDef, ...] = ()
    property_types: tuple[TypeDef, ...] = ()
    property_slots: tuple["PropertySlot", ...] = ()
    connectors: tuple[Connector, ...] = ()
    # Each connection rule licenses connections via a (start, end) pair of
    # connector ids; this is the unit the rules-vs-connectors arithmetic counts.
    connection_rules: tuple[tuple[str, str], ...] = ()
    graph_membership: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        def canon(items, key):
            return tuple(sorted(items, key=key))

        object.__setattr__(self, "graph_types", canon(self.graph_types, lambda t: (t.name, t.icon_path or "")))
        object.__setattr__(
            self,
            "object_types",
            canon(self.object_types, lambda t: (t.name, sorted(t.point_types), t.decomposes_to or "")),
        )
        object.__setattr__(self, "point_types", canon(self.point_types, lambda t: (t.name, t.icon_path or "")))
        object.__setattr__(
            self, "relationship_types", canon(self.relationship_types, lambda t: (t.name, t.role_types))
        )
        object.__setattr__(self, "role_types", canon(self.role_types, lambda t: (t.name, t.icon_path or "")))
        object.__setattr__(self, "property_types", canon(self.property_types, lambda t: (t.name, t.icon_path or "")))
        object.__setattr__(
            self,
            "property_slots",
            canon(
                self.property_slots,
                lambda s: (s.owner_kind.value, s.owner_type, s.property_type, s.value_datatype),
            ),
        )
        object.__setattr__(
            self,
            "connectors",
            canon(self.connectors, lambda c: (c.id, c.relationship_type, c.role_type, c.object_type)),
        )
        object.__setattr__(self, "connection_rules", tuple(sorted(tuple(p) for p in self.connection_rules)))
        object.__setattr__(
            self,
            "graph_membership",
            {k: frozenset(v) for k, v in sorted(self.graph_membership.items())},
        )

@dataclass(frozen=True)
class PropertySlot:
    """Attaches a property type to one of the five nonproperty kinds."""

    owner_kind: MetaKind
    owner_type: str
    property_type: str
    value_datatype: str


# ---------------------------------------------------------------------------
# Instance models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObjectInst:
    id: str
    type_name: str


@dataclass(frozen=True)
class RelationshipInst:
    id: str
    type_name: str


@dataclass(frozen=True)
class PointInst:
    id: str
    type_name: str
    owner: str  # object instance id


@dataclass(frozen=True)
class RoleInst:
    id: str
    type_name: str
    owner: str  # relationship instance id


@dataclass(frozen=True)
class PropertyValue:
    id: str
    type_name: str
    owner: str  # any nonproperty instance id, including the graph id
    value: PropertyLiteral


@dataclass(frozen=True)
class ConnectorBinding:
    """One side of a connection, justified by a cited connector rule."""

    connector_rule: str  # connector id in the governing MetaModel
    role: str  # role instance id
    endpoint_object: str  # object instance id
    endpoint_point: Optional[str] = None  # point instance id when port-bound

    @property
    def endpoint(self) -> str:
        """The visible endpoint id: the point when bound, else the object."""
        return self.endpoint_point if self.endpoint_point is not None else self.endpoint_object


@dataclass(frozen=True)
class Connection:
    """A directed link realized by a relationship: start binding to end binding."""

    relationship: str
    start: ConnectorBinding
    end: ConnectorBinding


@dataclass(frozen=True, eq=True)
class Model:
    """An instance graph conforming to a MetaModel.

    Like MetaModel, instance sets are canonicalized on construction.
    """

    graph_id: str
    graph_type: str
    objects: tuple[ObjectInst, ...] = ()
    relationships: tuple[RelationshipInst, ...] = ()
    points: tuple[PointInst, ...] = ()
    roles: tuple[RoleInst, ...] = ()
    property_values: tuple[PropertyValue, ...] = ()
    connections: tuple[Connection, ...] = ()
    icon_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        def canon(items):
            return tuple(sorted(items, key=lambda x: (x.id, x.type_name)))

        object.__setattr__(self, "objects", canon(self.objects))
        object.__setattr__(self, "relationships", canon(self.relationships))
        object.__setattr__(self, "points", canon(self.points))
        object.__setattr__(self, "roles", canon(self.roles))
        object.__setattr__(
            self,
            "property_values",
            tuple(sorted(self.property_values, key=lambda p: (p.id, p.type_name, p.owner))),
        )
        object.__setattr__(
            self, "connections", tuple(sorted(self.connections, key=lambda c: c.relationship))
        )
        object.__setattr__(self, "icon_overrides", dict(sorted(self.icon_overrides.items())))

    def connection_for(self, relationship_id: str) -> Optional[Connection]:
        for conn in self.connections:
            if conn.relationship == relationship_id:
                return conn
        return None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


class _Collector:
    def __init__(self):
        self.violations: list[Violation] = []

    def add(self, code: str, message: str, *ids: str):
        self.violations.append(Violation(code, message, tuple(ids)))

    def report(self) -> ValidationReport:
        return ValidationReport(tuple(sorted(self.violations, key=lambda v: (v.code, v.ids, v.message))))


def validate_metamodel(mm: MetaModel) -> ValidationReport:
    """Check every MetaModel invariant; all problems become report entries."""
    out = _Collector()

    kind_decls = {
        MetaKind.GRAPH: mm.graph_types,
        MetaKind.OBJECT: mm.object_types,
        MetaKind.POINT: mm.point_types,
        MetaKind.RELATIONSHIP: mm.relationship_types,
        MetaKind.ROLE: mm.role_types,
        MetaKind.PROPERTY: mm.property_types,
    }
    names: dict[MetaKind, set[str]] = {}
    for kind, decls in kind_decls.items():
        seen: set[str] = set()
        for decl in decls:
            if not is_type_name(decl.name):
                out.add("BAD_TYPE_NAME", f"{kind.value} type name {decl.name!r} is not a valid type name", decl.name)
            elif decl.name in RESERVED_TYPE_NAMES:
                out.add(
                    "RESERVED_TYPE_NAME",
                    f"{kind.value} type {decl.name!r} shadows a kind class name",
                    decl.name,
                )
            if decl.name in seen:
                out.add("DUPLICATE_TYPE", f"{kind.value} type {decl.name!r} declared more than once", decl.name)
            seen.add(decl.name)
        names[kind] = seen

    for obj in mm.object_types:
        for pt in sorted(obj.point_types):
            if pt not in names[MetaKind.POINT]:
                out.add("UNKNOWN_TYPE", f"object type {obj.name!r} lists undeclared point type {pt!r}", obj.name, pt)
        if obj.decomposes_to is not None and obj.decomposes_to not in names[MetaKind.GRAPH]:
            out.add(
                "UNKNOWN_TYPE",
                f"object type {obj.name!r} decomposes to undeclared graph type {obj.decomposes_to!r}",
                obj.name,
                obj.decomposes_to,
            )

    owned_points = {pt for obj in mm.object_types for pt in obj.point_types}
    for pt in mm.point_types:
        if pt.name not in owned_points:
            out.add("POINT_UNOWNED", f"point type {pt.name!r} is owned by no object type", pt.name)

    for rel in mm.relationship_types:
        if len(rel.role_types) != 2 or len(set(rel.role_types)) != 2:
            out.add(
                "REL_ROLE_ARITY",
                f"relationship type {rel.name!r} must declare exactly two distinct role types",
                rel.name,
            )
        for ro in rel.role_types:
            if ro not in names[MetaKind.ROLE]:
                out.add("UNKNOWN_TYPE", f"relationship type {rel.name!r} uses undeclared role type {ro!r}", rel.name, ro)

    seen_slots: set[tuple] = set()
    for slot in mm.property_slots:
        key = (slot.owner_kind, slot.owner_type, slot.property_type)
        if key in seen_slots:
            out.add(
                "DUPLICATE_SLOT",
                f"property slot ({slot.owner_kind.value}, {slot.owner_type}, {slot.property_type}) declared twice",
                slot.owner_type,
                slot.property_type,
            )
        seen_slots.add(key)
        if slot.owner_kind not in NONPROPERTY_KINDS:
            out.add(
                "PROP_OWNER_KIND",
                f"property slot owner kind {slot.owner_kind.value} cannot own properties",
                slot.owner_type,
                slot.property_type,
            )
        elif slot.owner_type not in names[slot.owner_kind]:
            out.add(
                "UNKNOWN_TYPE",
                f"property slot owner {slot.owner_type!r} is not a declared {slot.owner_kind.value} type",
                slot.owner_type,
            )
        if slot.property_type not in names[MetaKind.PROPERTY]:
            out.add(
                "UNKNOWN_TYPE",
                f"property slot uses undeclared property type {slot.property_type!r}",
                slot.property_type,
            )
        if slot.value_datatype not in VALUE_DATATYPES:
            out.add(
                "BAD_DATATYPE",
                f"property slot datatype {slot.value_datatype!r} is not one of {VALUE_DATATYPES}",
                slot.property_type,
            )

    rel_by_name = {r.name: r for r in mm.relationship_types}
    obj_by_name = {o.name: o for o in mm.object_types}
    seen_conn_ids: set[str] = set()
    for conn in mm.connectors:
        if not is_instance_id(conn.id):
            out.add("BAD_ID", f"connector id {conn.id!r} is not a valid id", conn.id)
        if conn.id in seen_conn_ids:
            out.add("DUPLICATE_CONNECTOR", f"connector id {conn.id!r} declared more than once", conn.id)
        seen_conn_ids.add(conn.id)
        if conn.relationship_type not in names[MetaKind.RELATIONSHIP]:
            out.add(
                "CONN_UNKNOWN_TYPE",
                f"connector {conn.id!r} cites undeclared relationship type {conn.relationship_type!r}",
                conn.id,
                conn.relationship_type,
            )
        if conn.role_type not in names[MetaKind.ROLE]:
            out.add(
                "CONN_UNKNOWN_TYPE",
                f"connector {conn.id!r} cites undeclared role type {conn.role_type!r}",
                conn.id,
                conn.role_type,
            )
        elif conn.relationship_type in rel_by_name and conn.role_type not in rel_by_name[conn.relationship_type].role_types:
            out.add(
                "CONN_ROLE_MISMATCH",
                f"connector {conn.id!r} role type {conn.role_type!r} is not a role of {conn.relationship_type!r}",
                conn.id,
            )
        if conn.object_type not in names[MetaKind.OBJECT]:
            out.add(
                "CONN_UNKNOWN_TYPE",
                f"connector {conn.id!r} cites undeclared object type {conn.object_type!r}",
                conn.id,
                conn.object_type,
            )
        if conn.point_type is not None:
            if conn.point_type not in names[MetaKind.POINT]:
                out.add(
                    "CONN_UNKNOWN_TYPE",
                    f"connector {conn.id!r} cites undeclared point type {conn.point_type!r}",
                    conn.id,
                    conn.point_type,
                )
            elif conn.object_type in obj_by_name and conn.point_type not in obj_by_name[conn.object_type].point_types:
                out.add(
                    "CONN_POINT_MISMATCH",
                    f"connector {conn.id!r} point type {conn.point_type!r} is not a port of {conn.object_type!r}",
                    conn.id,
                )

    seen_rules: set[tuple[str, str]] = set()
    for start, end in mm.connection_rules:
        for conn_id in (start, end):
            if conn_id not in seen_conn_ids:
                out.add("RULE_UNKNOWN_CONNECTOR", f"connection rule cites undeclared connector {conn_id!r}", conn_id)
        if (start, end) in seen_rules:
            out.add("DUPLICATE_RULE", f"connection rule ({start!r}, {end!r}) declared twice", start, end)
        seen_rules.add((start, end))

    for graph, members in mm.graph_membership.items():
        if graph not in names[MetaKind.GRAPH]:
            out.add("UNKNOWN_TYPE", f"graph membership entry for undeclared graph type {graph!r}", graph)
        for member in sorted(members):
            if member not in names[MetaKind.OBJECT] and member not in names[MetaKind.RELATIONSHIP]:
                out.add(
                    "MEMBER_KIND",
                    f"graph type {graph!r} lists {member!r}, which is not an object or relationship type",
                    graph,
                    member,
                )

    return out.report()


def _minted_suffixes(m: Model) -> dict[str, list[str]]:
    """Export IRI suffixes per instance, keyed for collision detection."""
    suffixes: dict[str, list[str]] = {}

    def put(type_name: str, ident: str, what: str):
        suffixes.setdefault(f"{type_name}_{ident}", []).append(what)

    put(m.graph_type, m.graph_id, f"graph {m.graph_id}")
    for o in m.objects:
        put(o.type_name, o.id, f"object {o.id}")
    for r in m.relationships:
        put(r.type_name, r.id, f"relationship {r.id}")
    for p in m.points:
        put(p.type_name, p.id, f"point {p.id}")
    for ro in m.roles:
        put(ro.type_name, ro.id, f"role {ro.id}")
    for pv in m.property_values:
        put(pv.type_name, pv.id, f"property {pv.id}")
    for conn in m.connections:
        put("Connector", f"{conn.relationship}_start", f"connection {conn.relationship} start")
        put("Connector", f"{conn.relationship}_end", f"connection {conn.relationship} end")
    return suffixes


def validate_model(mm: MetaModel, m: Model) -> ValidationReport:
    """Check all Model invariants against the governing MetaModel.

    Callers are expected to validate the MetaModel first; an invalid one
    simply yields extra UNKNOWN_TYPE noise here.
    """
    out = _Collector()

    graph_names = {t.name for t in mm.graph_types}
    obj_types = {t.name: t for t in mm.object_types}
    rel_types = {t.name: t for t in mm.relationship_types}
    point_names = {t.name for t in mm.point_types}
    role_names = {t.name for t in mm.role_types}
    prop_names = {t.name for t in mm.property_types}
    connectors = {c.id: c for c in mm.connectors}
    # Fast path for the "some rule licenses this binding" check: exact
    # content lookup instead of scanning every connector.
    connector_contents = {
        (c.relationship_type, c.role_type, c.object_type, c.point_type) for c in mm.connectors
    }
    slots = {(s.owner_kind, s.owner_type, s.property_type): s for s in mm.property_slots}

    all_ids: dict[str, str] = {}

    def claim(ident: str, what: str):
        if not is_instance_id(ident):
            out.add("BAD_ID", f"{what} id {ident!r} is not a valid id", ident)
        if ident in all_ids:
            out.add("DUPLICATE_ID", f"id {ident!r} used by both {all_ids[ident]} and {what}", ident)
        else:
            all_ids[ident] = what

    claim(m.graph_id, "graph")
    for o in m.objects:
        claim(o.id, "object")
    for r in m.relationships:
        claim(r.id, "relationship")
    for p in m.points:
        claim(p.id, "point")
    for ro in m.roles:
        claim(ro.id, "role")
    for pv in m.property_values:
        claim(pv.id, "property value")

    if m.graph_type not in graph_names:
        out.add("UNKNOWN_TYPE", f"graph type {m.graph_type!r} is not declared", m.graph_id, m.graph_type)

    objects = {o.id: o for o in m.objects}
    relationships = {r.id: r for r in m.relationships}
    points = {p.id: p for p in m.points}
    roles = {r.id: r for r in m.roles}

    allowed_members = mm.graph_membership.get(m.graph_type, frozenset())
    for o in m.objects:
        if o.type_name not in obj_types:
            out.add("UNKNOWN_TYPE", f"object {o.id!r} has undeclared type {o.type_name!r}", o.id, o.type_name)
        elif o.type_name not in allowed_members:
            out.add(
                "MEMBER_NOT_ALLOWED",
                f"object type {o.type_name!r} is not allowed in graph type {m.graph_type!r}",
                o.id,
            )
    for r in m.relationships:
        if r.type_name not in rel_types:
            out.add("UNKNOWN_TYPE", f"relationship {r.id!r} has undeclared type {r.type_name!r}", r.id, r.type_name)
        elif r.type_name not in allowed_members:
            out.add(
                "MEMBER_NOT_ALLOWED",
                f"relationship type {r.type_name!r} is not allowed in graph type {m.graph_type!r}",
                r.id,
            )

    for p in m.points:
        if p.type_name not in point_names:
            out.add("UNKNOWN_TYPE", f"point {p.id!r} has undeclared type {p.type_name!r}", p.id, p.type_name)
        owner = objects.get(p.owner)
        if owner is None:
            out.add("POINT_OWNER", f"point {p.id!r} owner {p.owner!r} is not an object of this model", p.id, p.owner)
        else:
            owner_def = obj_types.get(owner.type_name)
            if owner_def is not None and p.type_name not in owner_def.point_types:
                out.add(
                    "POINT_NOT_IN_TYPE",
                    f"point type {p.type_name!r} is not a port of object type {owner.type_name!r}",
                    p.id,
                    p.owner,
                )

    roles_by_rel: dict[str, list[RoleInst]] = {}
    for ro in m.roles:
        if ro.type_name not in role_names:
            out.add("UNKNOWN_TYPE", f"role {ro.id!r} has undeclared type {ro.type_name!r}", ro.id, ro.type_name)
        owner = relationships.get(ro.owner)
        if owner is None:
            out.add("ROLE_OWNER", f"role {ro.id!r} owner {ro.owner!r} is not a relationship of this model", ro.id, ro.owner)
        else:
            roles_by_rel.setdefault(ro.owner, []).append(ro)
            owner_def = rel_types.get(owner.type_name)
            if owner_def is not None and ro.type_name not in owner_def.role_types:
                out.add(
                    "ROLE_NOT_IN_TYPE",
                    f"role type {ro.type_name!r} is not a role of relationship type {owner.type_name!r}",
                    ro.id,
                    ro.owner,
                )

    for r in m.relationships:
        rel_def = rel_types.get(r.type_name)
        if rel_def is None or len(rel_def.role_types) != 2:
            continue
        owned = roles_by_rel.get(r.id, [])
        have = sorted(ro.type_name for ro in owned)
        want = sorted(rel_def.role_types)
        if have != want:
            out.add(
                "REL_ROLE_INSTANCES",
                f"relationship {r.id!r} must own exactly one role instance per role type {want}, has {have}",
                r.id,
            )

    kinds_by_id: dict[str, tuple[MetaKind, str]] = {m.graph_id: (MetaKind.GRAPH, m.graph_type)}
    kinds_by_id.update({o.id: (MetaKind.OBJECT, o.type_name) for o in m.objects})
    kinds_by_id.update({r.id: (MetaKind.RELATIONSHIP, r.type_name) for r in m.relationships})
    kinds_by_id.update({p.id: (MetaKind.POINT, p.type_name) for p in m.points})
    kinds_by_id.update({ro.id: (MetaKind.ROLE, ro.type_name) for ro in m.roles})

    for pv in m.property_values:
        if pv.type_name not in prop_names:
            out.add("UNKNOWN_TYPE", f"property value {pv.id!r} has undeclared type {pv.type_name!r}", pv.id, pv.type_name)
            continue
        owner = kinds_by_id.get(pv.owner)
        if owner is None:
            out.add("PROP_OWNER", f"property value {pv.id!r} owner {pv.owner!r} is not a nonproperty instance", pv.id, pv.owner)
            continue
        owner_kind, owner_type = owner
        slot = slots.get((owner_kind, owner_type, pv.type_name))
        if slot is None:
            out.add(
                "PROP_NO_SLOT",
                f"no property slot attaches {pv.type_name!r} to {owner_kind.value} type {owner_type!r}",
                pv.id,
                pv.owner,
            )
            continue
        expected = {
            "string": str,
            "integer": int,
            "decimal": Decimal,
            "boolean": bool,
        }[slot.value_datatype]
        # bool is a subclass of int; require the exact carrier type.
        if type(pv.value) is not expected:
            out.add(
                "PROP_VALUE_TYPE",
                f"property value {pv.id!r} must carry a {slot.value_datatype} value, has {type(pv.value).__name__}",
                pv.id,
            )
        elif isinstance(pv.value, Decimal) and not pv.value.is_finite():
            out.add(
                "PROP_VALUE_TYPE",
                f"property value {pv.id!r} must carry a finite decimal, has {pv.value}",
                pv.id,
            )

    seen_conn_rels: set[str] = set()
    for conn in m.connections:
        rel = relationships.get(conn.relationship)
        if rel is None:
            out.add(
                "CONN_UNKNOWN_REL",
                f"connection cites {conn.relationship!r}, which is not a relationship of this model",
                conn.relationship,
            )
            continue
        if conn.relationship in seen_conn_rels:
            out.add(
                "CONN_DUP_REL",
                f"relationship {conn.relationship!r} participates in more than one connection",
                conn.relationship,
            )
        seen_conn_rels.add(conn.relationship)

        start_role = roles.get(conn.start.role)
        end_role = roles.get(conn.end.role)
        if (
            start_role is None
            or end_role is None
            or start_role.id == end_role.id
            or start_role.owner != conn.relationship
            or end_role.owner != conn.relationship
        ):
            out.add(
                "CONN_ROLE_BINDING",
                f"connection on {conn.relationship!r} must cite two distinct role instances of that relationship",
                conn.relationship,
            )

        for side, binding in (("start", conn.start), ("end", conn.end)):
            endpoint_obj = objects.get(binding.endpoint_object)
            if endpoint_obj is None:
                out.add(
                    "CONN_UNKNOWN_ENDPOINT",
                    f"{side} binding of {conn.relationship!r} cites unknown object {binding.endpoint_object!r}",
                    conn.relationship,
                    binding.endpoint_object,
                )
            endpoint_point = None
            if binding.endpoint_point is not None:
                endpoint_point = points.get(binding.endpoint_point)
                if endpoint_point is None:
                    out.add(
                        "CONN_UNKNOWN_ENDPOINT",
                        f"{side} binding of {conn.relationship!r} cites unknown point {binding.endpoint_point!r}",
                        conn.relationship,
                        binding.endpoint_point,
                    )
                elif endpoint_point.owner != binding.endpoint_object:
                    out.add(
                        "CONN_POINT_OWNER",
                        f"{side} binding point {binding.endpoint_point!r} is not owned by object {binding.endpoint_object!r}",
                        conn.relationship,
                        binding.endpoint_point,
                    )

            role = roles.get(binding.role)
            if role is None or endpoint_obj is None:
                continue
            content = (
                rel.type_name,
                role.type_name,
                endpoint_obj.type_name,
                endpoint_point.type_name if endpoint_point is not None else None,
            )
            if content not in connector_contents:
                out.add(
                    "CONN_NO_RULE",
                    f"{side} binding of {conn.relationship!r} ({content[0]}, {content[1]}, {content[2]}"
                    + (f".{content[3]}" if content[3] else "")
                    + ") matches no declared connector",
                    conn.relationship,
                    binding.connector_rule,
                )
            cited = connectors.get(binding.connector_rule)
            if cited is None:
                out.add(
                    "CONN_NO_RULE",
                    f"{side} binding of {conn.relationship!r} cites undeclared connector {binding.connector_rule!r}",
                    conn.relationship,
                    binding.connector_rule,
                )
            elif (cited.relationship_type, cited.role_type, cited.object_type, cited.point_type) != content:
                out.add(
                    "CONN_RULE_MISMATCH",
                    f"{side} binding of {conn.relationship!r} does not match its cited connector {cited.id!r}",
                    conn.relationship,
                    cited.id,
                )

    for ident in m.icon_overrides:
        if ident not in kinds_by_id:
            out.add("ICON_UNKNOWN_ID", f"icon override for unknown instance {ident!r}", ident)

    for suffix, users in _minted_suffixes(m).items():
        if len(users) > 1:
            out.add(
                "IRI_COLLISION",
                f"instances {', '.join(users)} would mint the same export IRI suffix {suffix!r}",
                suffix,
            )

    return out.report()


def connection_endpoints(m: Model, relationship_id: str) -> tuple[str, str]:
    """Input and output endpoint ids of the connection carried by a relationship.

    The endpoint is the bound point id when the binding targets a port,
    otherwise the object id.
    """
    if not any(r.id == relationship_id for r in m.relationships):
        raise UnknownRelationshipError(f"{relationship_id!r} is not a relationship of this model")
    conn = m.connection_for(relationship_id)
    if conn is None:
        raise DanglingRelationshipError(f"relationship {relationship_id!r} participates in no connection")
    return conn.start.endpoint, conn.end.endpoint


def count_summary(mm: MetaModel) -> dict[MetaKind, int]:
    """Exact cardinality of each declaration set, keyed by kind."""
    return {
        MetaKind.GRAPH: len(mm.graph_types),
        MetaKind.OBJECT: len(mm.object_types),
        MetaKind.POINT: len(mm.point_types),
        MetaKind.RELATIONSHIP: len(mm.relationship_types),
        MetaKind.ROLE: len(mm.role_types),
        MetaKind.PROPERTY: len(mm.property_types),
        MetaKind.CONNECTOR: len(mm.connectors),
    }


class ConnectorArithmetic(NamedTuple):
    rules: int
    connectors: int
    savings: int


def connector_arithmetic(mm: MetaModel) -> ConnectorArithmetic:
    """Counts relating connection rules to connectors.

    Every rule cites a start and an end connector, so with no reuse the
    language needs twice as many connectors as rules. When k rules cite
    the same connector the k citations collapse into one declaration and
    save k - 1 connectors; ``savings`` totals those collapses, making
    ``connectors == 2 * rules - savings`` whenever every declared
    connector is cited by at least one rule.
    """
    rules = sorted(set(mm.connection_rules))
    citations: dict[str, int] = {}
    for start, end in rules:
        citations[start] = citations.get(start, 0) + 1
        citations[end] = citations.get(end, 0) + 1
    savings = sum(n - 1 for n in citations.values() if n > 1)
    return ConnectorArithmetic(rules=len(rules), connectors=len(mm.connectors), savings=savings)
