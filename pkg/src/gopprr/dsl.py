"""Textual document formats for language definitions and models.

The persistence layer is JSON-shaped text with a fixed, strict schema:
unknown fields are errors, and emission is canonical (sorted keys,
declarations sorted by kind and name, LF endings, UTF-8) so that
parse/emit round-trips are byte-stable. Decimal property values are
carried as JSON strings to keep emission deterministic.

File extensions: ``.gopprr.json`` for language definitions and
``.model.json`` for models.
"""

from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation
from typing import Any, Optional

from .core import (
    Connection,
    Connector,
    ConnectorBinding,
    GopprrError,
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
    ValidationReport,
    validate_metamodel,
    validate_model,
)

FORMAT_VERSION = 1


class DocumentSyntaxError(GopprrError):
    """The text is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DocumentSchemaError(GopprrError):
    """Well-formed JSON with the wrong shape."""

    def __init__(self, code: str, message: str, path: str = "$"):
        super().__init__(f"{code} at {path}: {message}")
        self.code = code
        self.path = path


class DocumentSemanticError(GopprrError):
    """The document parsed but the resulting value fails validation."""

    def __init__(self, report: ValidationReport):
        lines = "; ".join(f"{v.code}: {v.message}" for v in report.violations[:5])
        more = len(report.violations) - 5
        if more > 0:
            lines += f" (+{more} more)"
        super().__init__(f"document fails validation: {lines}")
        self.report = report


# ---------------------------------------------------------------------------
# Strict schema walking
# ---------------------------------------------------------------------------


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc


def _require_obj(value: Any, path: str, required: dict[str, type], optional: dict[str, type]) -> dict:
    if not isinstance(value, dict):
        raise DocumentSchemaError("WRONG_TYPE", f"expected an object, got {type(value).__name__}", path)
    for key in value:
        if key not in required and key not in optional:
            raise DocumentSchemaError("UNKNOWN_FIELD", f"unknown field {key!r}", path)
    for key, typ in required.items():
        if key not in value:
            raise DocumentSchemaError("MISSING_FIELD", f"missing field {key!r}", path)
        _check_type(value[key], typ, f"{path}.{key}")
    for key, typ in optional.items():
        if key in value:
            _check_type(value[key], typ, f"{path}.{key}")
    return value


def _check_type(value: Any, typ: type, path: str):
    if typ is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, typ)
    if not ok:
        raise DocumentSchemaError("WRONG_TYPE", f"expected {typ.__name__}, got {type(value).__name__}", path)


def _str_list(value: Any, path: str) -> list[str]:
    _check_type(value, list, path)
    for i, item in enumerate(value):
        _check_type(item, str, f"{path}[{i}]")
    return value


def _header(doc, expected_kind: str):
    if not isinstance(doc, dict):
        raise DocumentSchemaError("WRONG_TYPE", f"expected an object, got {type(doc).__name__}", "$")
    if doc.get("kind") != expected_kind:
        raise DocumentSchemaError("BAD_KIND", f"expected a {expected_kind!r} document, got {doc.get('kind')!r}", "$.kind")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentSchemaError(
            "UNSUPPORTED_VERSION", f"format_version {version!r} is not supported (expected {FORMAT_VERSION})", "$.format_version"
        )


def _check_unique(names: list[str], code: str, what: str, path: str):
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise DocumentSchemaError(code, f"{what} {name!r} appears more than once", path)
        seen.add(name)


# ---------------------------------------------------------------------------
# Language definition documents
# ---------------------------------------------------------------------------


def parse_metamodel(text: str) -> MetaModel:
    """Parse and validate a language definition document."""
    doc = _load_json(text)
    _header(doc, "metamodel")
    _require_obj(
        doc,
        "$",
        {"kind": str, "format_version": int, "language_name": str},
        {
            "graph_types": list,
            "object_types": list,
            "point_types": list,
            "relationship_types": list,
            "role_types": list,
            "property_types": list,
            "property_slots": list,
            "connectors": list,
            "connection_rules": list,
            "graph_membership": dict,
        },
    )

    def plain_types(key: str) -> list[TypeDef]:
        out = []
        for i, entry in enumerate(doc.get(key, [])):
            path = f"$.{key}[{i}]"
            _require_obj(entry, path, {"name": str}, {"icon_path": str})
            out.append(TypeDef(name=entry["name"], icon_path=entry.get("icon_path")))
        _check_unique([t.name for t in out], "DUPLICATE_TYPE", "type", f"$.{key}")
        return out

    graph_types = plain_types("graph_types")
    point_types = plain_types("point_types")
    role_types = plain_types("role_types")
    property_types = plain_types("property_types")

    object_types = []
    for i, entry in enumerate(doc.get("object_types", [])):
        path = f"$.object_types[{i}]"
        _require_obj(
            entry,
            path,
            {"name": str},
            {"point_types": list, "decomposes_to": str, "explore": bool, "icon_path": str},
        )
        object_types.append(
            ObjectTypeDef(
                name=entry["name"],
                point_types=frozenset(_str_list(entry.get("point_types", []), f"{path}.point_types")),
                decomposes_to=entry.get("decomposes_to"),
                explore=entry.get("explore", False),
                icon_path=entry.get("icon_path"),
            )
        )
    _check_unique([t.name for t in object_types], "DUPLICATE_TYPE", "type", "$.object_types")

    relationship_types = []
    for i, entry in enumerate(doc.get("relationship_types", [])):
        path = f"$.relationship_types[{i}]"
        _require_obj(entry, path, {"name": str, "role_types": list}, {"icon_path": str})
        relationship_types.append(
            RelationshipTypeDef(
                name=entry["name"],
                role_types=tuple(_str_list(entry["role_types"], f"{path}.role_types")),
                icon_path=entry.get("icon_path"),
            )
        )
    _check_unique([t.name for t in relationship_types], "DUPLICATE_TYPE", "type", "$.relationship_types")

    property_slots = []
    kind_values = {k.value: k for k in MetaKind}
    for i, entry in enumerate(doc.get("property_slots", [])):
        path = f"$.property_slots[{i}]"
        _require_obj(
            entry, path, {"owner_kind": str, "owner_type": str, "property_type": str, "value_datatype": str}, {}
        )
        kind = kind_values.get(entry["owner_kind"])
        if kind is None:
            raise DocumentSchemaError("BAD_KIND", f"unknown owner kind {entry['owner_kind']!r}", f"{path}.owner_kind")
        property_slots.append(
            PropertySlot(
                owner_kind=kind,
                owner_type=entry["owner_type"],
                property_type=entry["property_type"],
                value_datatype=entry["value_datatype"],
            )
        )

    connectors = []
    for i, entry in enumerate(doc.get("connectors", [])):
        path = f"$.connectors[{i}]"
        _require_obj(
            entry, path, {"id": str, "relationship_type": str, "role_type": str, "object_type": str}, {"point_type": str}
        )
        connectors.append(
            Connector(
                id=entry["id"],
                relationship_type=entry["relationship_type"],
                role_type=entry["role_type"],
                object_type=entry["object_type"],
                point_type=entry.get("point_type"),
            )
        )
    _check_unique([c.id for c in connectors], "DUPLICATE_ID", "connector", "$.connectors")

    connection_rules = []
    for i, entry in enumerate(doc.get("connection_rules", [])):
        path = f"$.connection_rules[{i}]"
        _require_obj(entry, path, {"start": str, "end": str}, {})
        connection_rules.append((entry["start"], entry["end"]))

    graph_membership = {}
    for graph, members in doc.get("graph_membership", {}).items():
        graph_membership[graph] = frozenset(_str_list(members, f"$.graph_membership.{graph}"))

    mm = MetaModel(
        language_name=doc["language_name"],
        graph_types=tuple(graph_types),
        object_types=tuple(object_types),
        point_types=tuple(point_types),
        relationship_types=tuple(relationship_types),
        role_types=tuple(role_types),
        property_types=tuple(property_types),
        property_slots=tuple(property_slots),
        connectors=tuple(connectors),
        connection_rules=tuple(connection_rules),
        graph_membership=graph_membership,
    )
    report = validate_metamodel(mm)
    if not report.ok:
        raise DocumentSemanticError(report)
    return mm


def emit_metamodel(mm: MetaModel) -> str:
    """Serialize a MetaModel to canonical document text."""
    doc: dict[str, Any] = {
        "kind": "metamodel",
        "format_version": FORMAT_VERSION,
        "language_name": mm.language_name,
    }

    def plain(decls) -> list[dict]:
        out = []
        for t in decls:
            entry: dict[str, Any] = {"name": t.name}
            if t.icon_path is not None:
                entry["icon_path"] = t.icon_path
            out.append(entry)
        return out

    if mm.graph_types:
        doc["graph_types"] = plain(mm.graph_types)
    if mm.object_types:
        entries = []
        for t in mm.object_types:
            entry = {"name": t.name}
            if t.point_types:
                entry["point_types"] = sorted(t.point_types)
            if t.decomposes_to is not None:
                entry["decomposes_to"] = t.decomposes_to
            if t.explore:
                entry["explore"] = True
            if t.icon_path is not None:
                entry["icon_path"] = t.icon_path
            entries.append(entry)
        doc["object_types"] = entries
    if mm.point_types:
        doc["point_types"] = plain(mm.point_types)
    if mm.relationship_types:
        entries = []
        for t in mm.relationship_types:
            entry = {"name": t.name, "role_types": list(t.role_types)}
            if t.icon_path is not None:
                entry["icon_path"] = t.icon_path
            entries.append(entry)
        doc["relationship_types"] = entries
    if mm.role_types:
        doc["role_types"] = plain(mm.role_types)
    if mm.property_types:
        doc["property_types"] = plain(mm.property_types)
    if mm.property_slots:
        doc["property_slots"] = [
            {
                "owner_kind": s.owner_kind.value,
                "owner_type": s.owner_type,
                "property_type": s.property_type,
                "value_datatype": s.value_datatype,
            }
            for s in mm.property_slots
        ]
    if mm.connectors:
        entries = []
        for c in mm.connectors:
            entry = {
                "id": c.id,
                "relationship_type": c.relationship_type,
                "role_type": c.role_type,
                "object_type": c.object_type,
            }
            if c.point_type is not None:
                entry["point_type"] = c.point_type
            entries.append(entry)
        doc["connectors"] = entries
    if mm.connection_rules:
        doc["connection_rules"] = [{"start": s, "end": e} for s, e in mm.connection_rules]
    if mm.graph_membership:
        doc["graph_membership"] = {k: sorted(v) for k, v in mm.graph_membership.items()}

    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Model documents
# ---------------------------------------------------------------------------


def _decode_value(raw: Any, datatype: Optional[str], path: str):
    """Turn a JSON scalar into the in-memory property literal."""
    if isinstance(raw, float):
        raise DocumentSchemaError(
            "WRONG_TYPE", "floating point values are not allowed; carry decimals as strings", path
        )
    if not isinstance(raw, (str, int, bool)):
        raise DocumentSchemaError("WRONG_TYPE", f"property values must be scalars, got {type(raw).__name__}", path)
    if datatype == "decimal" and isinstance(raw, str):
        try:
            value = Decimal(raw)
        except InvalidOperation:
            # Keep the raw string; validation reports PROP_VALUE_TYPE.
            return raw
        # NaN/Infinity have no decimal lexical form on the wire.
        return value if value.is_finite() else raw
    return raw


def parse_model(text: str, mm: MetaModel) -> Model:
    """Parse a model document and validate it against its language."""
    doc = _load_json(text)
    _header(doc, "model")
    _require_obj(
        doc,
        "$",
        {"kind": str, "format_version": int, "graph": dict},
        {
            "objects": list,
            "relationships": list,
            "points": list,
            "roles": list,
            "property_values": list,
            "connections": list,
            "icon_overrides": dict,
        },
    )
    _require_obj(doc["graph"], "$.graph", {"id": str, "type": str}, {})

    def instances(key: str, extra: dict[str, type]):
        out = []
        for i, entry in enumerate(doc.get(key, [])):
            path = f"$.{key}[{i}]"
            _require_obj(entry, path, {"id": str, "type": str, **extra}, {})
            out.append(entry)
        _check_unique([e["id"] for e in out], "DUPLICATE_ID", "instance", f"$.{key}")
        return out

    objects = [ObjectInst(e["id"], e["type"]) for e in instances("objects", {})]
    relationships = [RelationshipInst(e["id"], e["type"]) for e in instances("relationships", {})]
    points = [PointInst(e["id"], e["type"], e["owner"]) for e in instances("points", {"owner": str})]
    roles = [RoleInst(e["id"], e["type"], e["owner"]) for e in instances("roles", {"owner": str})]

    # Keyed by kind as well: the same type name may legally occur under
    # two kinds with different datatypes for one property type.
    slot_datatypes: dict[tuple[MetaKind, str, str], str] = {}
    for slot in mm.property_slots:
        slot_datatypes[(slot.owner_kind, slot.owner_type, slot.property_type)] = slot.value_datatype
    owner_types: dict[str, tuple[MetaKind, str]] = {
        doc["graph"]["id"]: (MetaKind.GRAPH, doc["graph"]["type"])
    }
    for kind, group in (
        (MetaKind.OBJECT, objects),
        (MetaKind.RELATIONSHIP, relationships),
        (MetaKind.POINT, points),
        (MetaKind.ROLE, roles),
    ):
        for inst in group:
            owner_types.setdefault(inst.id, (kind, inst.type_name))

    property_values = []
    for i, entry in enumerate(doc.get("property_values", [])):
        path = f"$.property_values[{i}]"
        _require_obj(entry, path, {"id": str, "type": str, "owner": str}, {"value": object})
        if "value" not in entry:
            raise DocumentSchemaError("MISSING_FIELD", "missing field 'value'", path)
        owner = owner_types.get(entry["owner"])
        datatype = slot_datatypes.get((owner[0], owner[1], entry["type"])) if owner else None
        property_values.append(
            PropertyValue(
                id=entry["id"],
                type_name=entry["type"],
                owner=entry["owner"],
                value=_decode_value(entry["value"], datatype, f"{path}.value"),
            )
        )
    _check_unique([p.id for p in property_values], "DUPLICATE_ID", "instance", "$.property_values")

    def binding(entry: Any, path: str) -> ConnectorBinding:
        _require_obj(entry, path, {"connector": str, "role": str, "object": str}, {"point": str})
        return ConnectorBinding(
            connector_rule=entry["connector"],
            role=entry["role"],
            endpoint_object=entry["object"],
            endpoint_point=entry.get("point"),
        )

    connections = []
    for i, entry in enumerate(doc.get("connections", [])):
        path = f"$.connections[{i}]"
        _require_obj(entry, path, {"relationship": str, "start": dict, "end": dict}, {})
        connections.append(
            Connection(
                relationship=entry["relationship"],
                start=binding(entry["start"], f"{path}.start"),
                end=binding(entry["end"], f"{path}.end"),
            )
        )

    icon_overrides = {}
    for ident, path_value in doc.get("icon_overrides", {}).items():
        _check_type(path_value, str, f"$.icon_overrides.{ident}")
        icon_overrides[ident] = path_value

    m = Model(
        graph_id=doc["graph"]["id"],
        graph_type=doc["graph"]["type"],
        objects=tuple(objects),
        relationships=tuple(relationships),
        points=tuple(points),
        roles=tuple(roles),
        property_values=tuple(property_values),
        connections=tuple(connections),
        icon_overrides=icon_overrides,
    )
    report = validate_model(mm, m)
    if not report.ok:
        raise DocumentSemanticError(report)
    return m


def emit_model(m: Model) -> str:
    """Serialize a Model to canonical document text."""
    doc: dict[str, Any] = {
        "kind": "model",
        "format_version": FORMAT_VERSION,
        "graph": {"id": m.graph_id, "type": m.graph_type},
    }
    if m.objects:
        doc["objects"] = [{"id": o.id, "type": o.type_name} for o in m.objects]
    if m.relationships:
        doc["relationships"] = [{"id": r.id, "type": r.type_name} for r in m.relationships]
    if m.points:
        doc["points"] = [{"id": p.id, "type": p.type_name, "owner": p.owner} for p in m.points]
    if m.roles:
        doc["roles"] = [{"id": r.id, "type": r.type_name, "owner": r.owner} for r in m.roles]
    if m.property_values:
        entries = []
        for pv in m.property_values:
            value: Any = str(pv.value) if isinstance(pv.value, Decimal) else pv.value
            entries.append({"id": pv.id, "type": pv.type_name, "owner": pv.owner, "value": value})
        doc["property_values"] = entries
    if m.connections:
        entries = []
        for conn in m.connections:
            def side(b: ConnectorBinding) -> dict:
                out = {"connector": b.connector_rule, "role": b.role, "object": b.endpoint_object}
                if b.endpoint_point is not None:
                    out["point"] = b.endpoint_point
                return out

            entries.append({"relationship": conn.relationship, "start": side(conn.start), "end": side(conn.end)})
        doc["connections"] = entries
    if m.icon_overrides:
        doc["icon_overrides"] = dict(m.icon_overrides)

    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
