"""Acceptance suite.

One test per acceptance criterion, each enforcing its stated tolerance
(exact equality everywhere, wall-clock budgets where given) and
printing a PASS line so `pytest -v -s tests/test_acceptance.py` reads
as a checklist.
"""

import functools
import random
import time

from gopprr import (
    Pattern,
    TriplePattern,
    Var,
    Vocabulary,
    completeness_report,
    connection_endpoints,
    connector_arithmetic,
    export_model,
    logic_report,
    match,
    parse_metamodel,
    parse_model,
    emit_metamodel,
    emit_model,
    parse_ntriples,
    serialize_ntriples,
    verify,
)
from gopprr.cli import main
from gopprr.fixtures import PACK_NAMES, load_pack, metamodel_path, model_paths

from genmodels import random_corpus, random_metamodel
from oracles import binding_licensed_by_scan, brute_force_match, traversal_completeness

VOCAB = Vocabulary()


@functools.lru_cache(maxsize=1)
def corpus():
    """Shared random corpus: >= 100 valid models of <= 50 elements."""
    return random_corpus(seed=2024, count=100, max_elements=50)


def report(criterion: str, elapsed: float, detail: str):
    print(f"[acceptance] {criterion}: PASS ({elapsed:.2f}s, {detail})")


def test_criterion_1_connector_arithmetic_law():
    started = time.monotonic()
    rng = random.Random(101)
    checked = 0
    for _ in range(200):
        mm = random_metamodel(rng, n_rules=rng.randint(0, 40), cluster=0)
        arith = connector_arithmetic(mm)
        assert arith.connectors == 2 * arith.rules
        assert arith.savings == 0
        checked += 1
    cluster_mm = random_metamodel(random.Random(102), n_rules=12, cluster=12)
    assert connector_arithmetic(cluster_mm) == (12, 13, 11)
    # Mixed sharing: the identity holds with the generator's planned cluster.
    for cluster_size in (2, 5, 9):
        mm = random_metamodel(random.Random(103 + cluster_size), n_rules=cluster_size + 4, cluster=cluster_size)
        arith = connector_arithmetic(mm)
        assert arith.savings == cluster_size - 1
        assert arith.connectors == 2 * arith.rules - arith.savings
        checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 5.0
    report("criterion 1 (connector arithmetic law)", elapsed, f"{checked} metamodels, 12-rule cluster -> 13")


def test_criterion_2_completeness_queries():
    started = time.monotonic()
    pairs = corpus()
    assert len(pairs) >= 100
    for mm, m in pairs:
        got = completeness_report(export_model(mm, m))
        expected = traversal_completeness(m, VOCAB.base)
        assert got.graph_members == expected["graph_members"]
        assert got.structure_links == expected["structure_links"]
        assert got.property_links == expected["property_links"]
    elapsed = time.monotonic() - started
    assert elapsed < 10.0
    report("criterion 2 (completeness queries)", elapsed, f"{len(pairs)} models, three sections each")


def test_criterion_3_logic_queries_and_fault_injection():
    started = time.monotonic()
    pairs = corpus()
    for mm, m in pairs:
        got = logic_report(export_model(mm, m))
        type_of = {i.id: i.type_name for group in (m.objects, m.relationships, m.points) for i in group}
        point_owner = {p.id: p.owner for p in m.points}
        expected = set()
        for conn in m.connections:
            start_endpoint, end_endpoint = connection_endpoints(m, conn.relationship)
            start_obj = point_owner.get(start_endpoint, start_endpoint)
            end_obj = point_owner.get(end_endpoint, end_endpoint)
            expected.add(
                (
                    VOCAB.individual_iri(type_of[conn.relationship], conn.relationship).value,
                    VOCAB.individual_iri(type_of[start_obj], start_obj).value,
                    VOCAB.individual_iri(type_of[end_obj], end_obj).value,
                )
            )
        assert {row[:3] for row in got.connections} == expected
        assert len(got.connections) == len(m.connections)

    # Fault injection: every deletion of a membership, structure or
    # connect triple must be detected. ibd_small is the required sweep;
    # order_flow adds the port-bound path, where dropping a
    # roleBindingPoint changes the auxiliary point columns.
    detected = total = 0
    sweeps = [("mini_sysml", "ibd_small", False), ("mini_bpmn", "order_flow", True)]
    for pack_name, model_name, with_points in sweeps:
        pack = load_pack(pack_name)
        m = pack.models[model_name]
        ts = export_model(pack.metamodel, m)
        sweep = {
            VOCAB.graph_including_object,
            VOCAB.graph_including_relationship,
            VOCAB.graph_including_connector,
            VOCAB.link_object_and_point,
            VOCAB.link_relationship_and_role,
            VOCAB.link_from_relationship,
            VOCAB.link_to_object,
            VOCAB.connect,
        }
        if with_points:
            sweep.add(VOCAB.role_binding_point)
        victims = [t for t in ts if t.predicate in sweep]
        assert len(victims) > 0
        detected += sum(1 for victim in victims if not verify(m, pack.metamodel, ts.without(victim)).empty)
        total += len(victims)
    assert detected == total
    elapsed = time.monotonic() - started
    report(
        "criterion 3 (logic queries + fault injection)",
        elapsed,
        f"{len(corpus())} models, {detected}/{total} deletions detected",
    )


def test_criterion_4_round_trip_determinism(tmp_path):
    started = time.monotonic()
    exports = 0
    for pack_name in PACK_NAMES:
        mm_path = str(metamodel_path(pack_name))
        jobs = [(mm_path, None)] + [(mm_path, str(p)) for p in model_paths(pack_name)]
        for mm_arg, model_arg in jobs:
            argv = ["export", mm_arg] + ([model_arg] if model_arg else [])
            out1 = tmp_path / f"{pack_name}_{exports}_1.nt"
            out2 = tmp_path / f"{pack_name}_{exports}_2.nt"
            assert main(argv + ["--out", str(out1)]) == 0
            assert main(argv + ["--out", str(out2)]) == 0
            blob = out1.read_bytes()
            assert blob == out2.read_bytes()
            # Serializer/parser identity on the exported set.
            ts = parse_ntriples(blob.decode("utf-8"))
            assert parse_ntriples(serialize_ntriples(ts)) == ts
            assert serialize_ntriples(ts).encode("utf-8") == blob
            exports += 1

    round_trips = 0
    for mm, m in corpus():
        assert parse_metamodel(emit_metamodel(mm)) == mm
        assert parse_model(emit_model(m), mm) == m
        ts = export_model(mm, m)
        assert parse_ntriples(serialize_ntriples(ts)) == ts
        round_trips += 1
    elapsed = time.monotonic() - started
    report(
        "criterion 4 (round-trip determinism)",
        elapsed,
        f"{exports} byte-identical exports, {round_trips} corpus round-trips",
    )


def dense_store(rng: random.Random, size: int):
    """A synthetic store with heavy predicate fan-out near the size bound."""
    from gopprr import Iri, Triple, TripleSet, TypedLiteral

    subjects = [Iri(f"urn:n{i}") for i in range(25)]
    predicates = [Iri(f"urn:p{i}") for i in range(6)]
    triples = set()
    while len(triples) < size:
        obj = rng.choice(subjects) if rng.random() < 0.8 else TypedLiteral(f"v{rng.randint(0, 9)}")
        triples.add(Triple(rng.choice(subjects), rng.choice(predicates), obj))
    return TripleSet(tuple(triples))


def test_criterion_5_query_engine_soundness():
    started = time.monotonic()
    rng = random.Random(505)
    stores = [export_model(mm, m) for mm, m in corpus()[:8]]
    for pack_name in PACK_NAMES:
        pack = load_pack(pack_name)
        stores += [export_model(pack.metamodel, m) for m in pack.models.values()]
    stores.append(dense_store(rng, 450))
    assert all(len(ts) <= 500 for ts in stores)

    patterns_checked = 0
    var_pool = [Var(name) for name in ("a", "b", "c", "d")]
    while patterns_checked < 60:
        ts = rng.choice(stores)
        predicates = sorted({t.predicate for t in ts}, key=lambda i: i.value)
        terms = sorted({t.subject for t in ts}, key=lambda i: i.value)
        clauses = []
        for _ in range(rng.randint(1, 3)):
            subject = rng.choice(var_pool) if rng.random() < 0.7 else rng.choice(terms)
            predicate = rng.choice(predicates) if rng.random() < 0.8 else rng.choice(var_pool)
            obj = rng.choice(var_pool) if rng.random() < 0.7 else rng.choice(terms)
            clauses.append(TriplePattern(subject, predicate, obj))
        pattern = Pattern(tuple(clauses))
        assert match(ts, pattern).as_set() == brute_force_match(ts, pattern)
        patterns_checked += 1
    elapsed = time.monotonic() - started
    report("criterion 5 (query engine soundness)", elapsed, f"{patterns_checked} patterns, {len(stores)} stores")


def test_criterion_6_invariant_suite():
    started = time.monotonic()
    models = 0
    bindings = 0
    for mm, m in corpus():
        roles_by_rel: dict[str, list] = {}
        for role in m.roles:
            roles_by_rel.setdefault(role.owner, []).append(role)
        for rel in m.relationships:
            owned = roles_by_rel.get(rel.id, [])
            assert len(owned) == 2
            assert len({r.type_name for r in owned}) == 2
        object_ids = {o.id for o in m.objects}
        for point in m.points:
            assert point.owner in object_ids
        for conn in m.connections:
            for binding in (conn.start, conn.end):
                assert binding_licensed_by_scan(mm, m, conn.relationship, binding)
                bindings += 1
            start_type = next(r.type_name for r in m.roles if r.id == conn.start.role)
            end_type = next(r.type_name for r in m.roles if r.id == conn.end.role)
            assert start_type != end_type
        models += 1
    elapsed = time.monotonic() - started
    report(
        "criterion 6 (invariant suite)",
        elapsed,
        f"{models} models, {bindings} bindings licensed under exhaustive scan, zero violations",
    )
