"""Document parsing, canonical emission and round-trip identity."""

import json

import pytest

from gopprr import (
    DocumentSchemaError,
    DocumentSemanticError,
    DocumentSyntaxError,
    MetaKind,
    MetaModel,
    count_summary,
    emit_metamodel,
    emit_model,
    parse_metamodel,
    parse_model,
)
from gopprr.core import COUNT_TABLE_KINDS
from gopprr.fixtures import PACK_NAMES, metamodel_path, model_paths

from genmodels import random_corpus

MINIMAL_METAMODEL = """
{
  "kind": "metamodel",
  "format_version": 1,
  "language_name": "One",
  "graph_types": [{"name": "G"}]
}
"""

EMPTY_METAMODEL_CANONICAL = (
    '{\n  "format_version": 1,\n  "kind": "metamodel",\n  "language_name": "Empty"\n}\n'
)


class TestParseMetamodel:
    def test_minimal_document(self):
        mm = parse_metamodel(MINIMAL_METAMODEL)
        table = tuple(count_summary(mm)[k] for k in COUNT_TABLE_KINDS)
        assert table == (1, 0, 0, 0, 0, 0)

    def test_fixture_counts_match_hand_count(self):
        text = metamodel_path("mini_sysml").read_text(encoding="utf-8")
        doc = json.loads(text)
        mm = parse_metamodel(text)
        counts = count_summary(mm)
        assert counts[MetaKind.OBJECT] == len(doc["object_types"])
        assert counts[MetaKind.ROLE] == len(doc["role_types"])

    def test_duplicate_type_name_is_schema_error(self):
        doc = {
            "kind": "metamodel",
            "format_version": 1,
            "language_name": "X",
            "object_types": [{"name": "A"}, {"name": "A"}],
        }
        with pytest.raises(DocumentSchemaError) as err:
            parse_metamodel(json.dumps(doc))
        assert err.value.code == "DUPLICATE_TYPE"

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(DocumentSchemaError) as err:
            parse_metamodel('{"kind": "metamodel", "format_version": 1, "language_name": "X", "extras": []}')
        assert err.value.code == "UNKNOWN_FIELD"

    def test_unknown_nested_key_rejected(self):
        doc = {
            "kind": "metamodel",
            "format_version": 1,
            "language_name": "X",
            "graph_types": [{"name": "G", "color": "red"}],
        }
        with pytest.raises(DocumentSchemaError) as err:
            parse_metamodel(json.dumps(doc))
        assert err.value.code == "UNKNOWN_FIELD"

    def test_unsupported_version_gated(self):
        with pytest.raises(DocumentSchemaError) as err:
            parse_metamodel('{"kind": "metamodel", "format_version": 2, "language_name": "X"}')
        assert err.value.code == "UNSUPPORTED_VERSION"

    def test_syntax_error_carries_position(self):
        with pytest.raises(DocumentSyntaxError) as err:
            parse_metamodel('{"kind": "metamodel",\n  broken')
        assert err.value.line == 2
        assert err.value.column >= 1

    def test_semantic_error_carries_report(self):
        doc = {
            "kind": "metamodel",
            "format_version": 1,
            "language_name": "X",
            "relationship_types": [{"name": "R", "role_types": ["a"]}],
            "role_types": [{"name": "a"}],
        }
        with pytest.raises(DocumentSemanticError) as err:
            parse_metamodel(json.dumps(doc))
        assert "REL_ROLE_ARITY" in err.value.report.codes()


class TestParseModel:
    def test_empty_model_document(self):
        mm = parse_metamodel(MINIMAL_METAMODEL)
        m = parse_model('{"kind": "model", "format_version": 1, "graph": {"id": "g1", "type": "G"}}', mm)
        assert m.objects == ()
        assert m.graph_id == "g1"

    def test_fixture_model_shape(self, sysml_pack):
        m = sysml_pack.models["ibd_small"]
        assert len(m.objects) == 3
        assert len(m.relationships) == 2
        assert len(m.connections) == 2

    def test_undeclared_type_is_semantic_error(self):
        mm = parse_metamodel(MINIMAL_METAMODEL)
        doc = {
            "kind": "model",
            "format_version": 1,
            "graph": {"id": "g1", "type": "G"},
            "objects": [{"id": "x", "type": "Foo"}],
        }
        with pytest.raises(DocumentSemanticError) as err:
            parse_model(json.dumps(doc), mm)
        assert "UNKNOWN_TYPE" in err.value.report.codes()

    def test_duplicate_instance_id_is_schema_error(self):
        mm = parse_metamodel(MINIMAL_METAMODEL)
        doc = {
            "kind": "model",
            "format_version": 1,
            "graph": {"id": "g1", "type": "G"},
            "objects": [{"id": "x", "type": "G"}, {"id": "x", "type": "G"}],
        }
        with pytest.raises(DocumentSchemaError) as err:
            parse_model(json.dumps(doc), mm)
        assert err.value.code == "DUPLICATE_ID"

    def test_float_property_value_rejected(self, sysml_pack):
        doc = {
            "kind": "model",
            "format_version": 1,
            "graph": {"id": "g1", "type": "InternalBlockDiagram"},
            "objects": [{"id": "b", "type": "Block"}],
            "property_values": [{"id": "pv", "type": "Weight", "owner": "b", "value": 12.5}],
        }
        with pytest.raises(DocumentSchemaError):
            parse_model(json.dumps(doc), sysml_pack.metamodel)

    def test_wrong_document_kind(self, sysml_pack):
        with pytest.raises(DocumentSchemaError) as err:
            parse_model(MINIMAL_METAMODEL, sysml_pack.metamodel)
        assert err.value.code == "BAD_KIND"

    def test_slot_datatype_disambiguated_by_owner_kind(self):
        # A graph type and an object type may share a name; the same
        # property type can carry different datatypes on each.
        mm_doc = {
            "kind": "metamodel",
            "format_version": 1,
            "language_name": "Twin",
            "graph_types": [{"name": "X"}],
            "object_types": [{"name": "X"}],
            "property_types": [{"name": "P"}],
            "property_slots": [
                {"owner_kind": "Graph", "owner_type": "X", "property_type": "P", "value_datatype": "string"},
                {"owner_kind": "Object", "owner_type": "X", "property_type": "P", "value_datatype": "decimal"},
            ],
            "graph_membership": {"X": ["X"]},
        }
        mm = parse_metamodel(json.dumps(mm_doc))
        m_doc = {
            "kind": "model",
            "format_version": 1,
            "graph": {"id": "g1", "type": "X"},
            "objects": [{"id": "o1", "type": "X"}],
            "property_values": [
                {"id": "pv_g", "type": "P", "owner": "g1", "value": "3.14"},
                {"id": "pv_o", "type": "P", "owner": "o1", "value": "3.14"},
            ],
        }
        m = parse_model(json.dumps(m_doc), mm)
        values = {pv.id: pv.value for pv in m.property_values}
        assert values["pv_g"] == "3.14"  # string slot keeps the str
        from decimal import Decimal

        assert values["pv_o"] == Decimal("3.14")
        assert parse_model(emit_model(m), mm) == m

    def test_non_finite_decimal_rejected(self, sysml_pack):
        doc = {
            "kind": "model",
            "format_version": 1,
            "graph": {"id": "g1", "type": "InternalBlockDiagram"},
            "objects": [{"id": "b", "type": "Block"}],
            "property_values": [{"id": "pv", "type": "Weight", "owner": "b", "value": "NaN"}],
        }
        with pytest.raises(DocumentSemanticError) as err:
            parse_model(json.dumps(doc), sysml_pack.metamodel)
        assert "PROP_VALUE_TYPE" in err.value.report.codes()


class TestCanonicalEmission:
    def test_empty_metamodel_golden_bytes(self):
        assert emit_metamodel(MetaModel(language_name="Empty")) == EMPTY_METAMODEL_CANONICAL

    def test_emission_is_deterministic(self, sysml_pack):
        assert emit_metamodel(sysml_pack.metamodel) == emit_metamodel(sysml_pack.metamodel)
        m = sysml_pack.models["ibd_small"]
        assert emit_model(m) == emit_model(m)

    @pytest.mark.parametrize("pack_name", PACK_NAMES)
    def test_fixture_documents_round_trip(self, pack_name):
        mm_text = metamodel_path(pack_name).read_text(encoding="utf-8")
        mm = parse_metamodel(mm_text)
        canonical = emit_metamodel(mm)
        # Canonical-form idempotence, byte for byte.
        assert emit_metamodel(parse_metamodel(canonical)) == canonical
        assert parse_metamodel(canonical) == mm
        for path in model_paths(pack_name):
            m = parse_model(path.read_text(encoding="utf-8"), mm)
            canonical_m = emit_model(m)
            assert parse_model(canonical_m, mm) == m
            assert emit_model(parse_model(canonical_m, mm)) == canonical_m

    def test_generated_corpus_round_trips(self):
        for mm, m in random_corpus(seed=31, count=25, max_elements=50):
            assert parse_metamodel(emit_metamodel(mm)) == mm
            assert parse_model(emit_model(m), mm) == m
            assert emit_metamodel(parse_metamodel(emit_metamodel(mm))) == emit_metamodel(mm)
            assert emit_model(parse_model(emit_model(m), mm)) == emit_model(m)

    def test_lf_endings_and_trailing_newline(self, sysml_pack):
        text = emit_metamodel(sysml_pack.metamodel)
        assert "\r" not in text
        assert text.endswith("\n")
