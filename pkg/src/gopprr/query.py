"""Conjunctive graph-pattern queries and the two verification suites.

One evaluation core (``match``) answers basic graph patterns made of
constants and variables. On top of it sit the completeness queries
(graph membership, structural links, property attachment) and the logic
queries (connections and their directions), plus ``verify``, which
diffs both query suites against the model-side ground truth.

TripleSets are immutable, so everything here is safe to run
concurrently over a shared store.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .core import GopprrError, MetaModel, Model
from .kgexport import (
    DEFAULT_VOCABULARY,
    Iri,
    Term,
    Triple,
    TripleSet,
    TypedLiteral,
    Vocabulary,
    serialize_term,
)


class MalformedPatternError(GopprrError):
    """The query pattern violates the pattern well-formedness rules."""


@dataclass(frozen=True)
class Var:
    """A named query variable."""

    name: str


PatternTerm = Union[Var, Iri, TypedLiteral]


@dataclass(frozen=True)
class TriplePattern:
    subject: Union[Var, Iri]
    predicate: Union[Var, Iri]
    object: PatternTerm


@dataclass(frozen=True)
class Pattern:
    """A conjunction of triple patterns sharing variables."""

    clauses: tuple[TriplePattern, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))

    def variables(self) -> tuple[str, ...]:
        seen: list[str] = []
        for clause in self.clauses:
            for slot in (clause.subject, clause.predicate, clause.object):
                if isinstance(slot, Var) and slot.name not in seen:
                    seen.append(slot.name)
        return tuple(seen)


@dataclass(frozen=True)
class BindingSet:
    """Deduplicated solutions in deterministic order.

    Rows align with ``variables``; iteration yields one mapping per
    solution.
    """

    variables: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[dict[str, Term]]:
        for row in self.rows:
            yield dict(zip(self.variables, row))

    def as_set(self) -> frozenset[tuple[Term, ...]]:
        return frozenset(self.rows)


def _check_pattern(pattern: Pattern, select: Optional[tuple[str, ...]]):
    if not pattern.clauses:
        raise MalformedPatternError("a pattern needs at least one triple pattern")
    for clause in pattern.clauses:
        for slot, allowed in (
            (clause.subject, (Var, Iri)),
            (clause.predicate, (Var, Iri)),
            (clause.object, (Var, Iri, TypedLiteral)),
        ):
            if not isinstance(slot, allowed):
                raise MalformedPatternError(f"pattern position holds {type(slot).__name__}, expected {allowed}")
        for slot in (clause.subject, clause.predicate, clause.object):
            if isinstance(slot, Var) and not slot.name:
                raise MalformedPatternError("variable names must be non-empty")
    if select is not None:
        known = set(pattern.variables())
        for name in select:
            if name not in known:
                raise MalformedPatternError(f"selected variable {name!r} does not occur in the pattern")


def match(ts: TripleSet, pattern: Pattern, select: Optional[tuple[str, ...]] = None) -> BindingSet:
    """Evaluate a conjunctive pattern over a store.

    Clauses are joined with the most-constrained clause first (constants
    and already-bound variables count); set semantics make the evaluation
    order unobservable. Output rows are sorted by their serialized form.
    """
    _check_pattern(pattern, select)

    by_predicate: dict[str, list[Triple]] = {}
    for triple in ts:
        by_predicate.setdefault(triple.predicate.value, []).append(triple)

    def candidates(clause: TriplePattern, bound: dict[str, Term]) -> list[Triple]:
        predicate = clause.predicate
        if isinstance(predicate, Var) and predicate.name in bound:
            predicate = bound[predicate.name]
        if isinstance(predicate, Iri):
            return by_predicate.get(predicate.value, [])
        return list(ts)

    def unify(clause: TriplePattern, triple: Triple, bound: dict[str, Term]) -> Optional[dict[str, Term]]:
        out = bound
        for slot, value in ((clause.subject, triple.subject), (clause.predicate, triple.predicate), (clause.object, triple.object)):
            if isinstance(slot, Var):
                existing = out.get(slot.name)
                if existing is None:
                    if out is bound:
                        out = dict(bound)
                    out[slot.name] = value
                elif existing != value:
                    return None
            elif slot != value:
                return None
        return out if out is not bound else dict(bound)

    def selectivity(clause: TriplePattern, bound_vars: set[str]) -> int:
        score = 0
        for slot in (clause.subject, clause.predicate, clause.object):
            if not isinstance(slot, Var) or slot.name in bound_vars:
                score += 1
        return score

    remaining = list(pattern.clauses)
    frontier: list[dict[str, Term]] = [{}]
    bound_vars: set[str] = set()
    while remaining:
        best = max(range(len(remaining)), key=lambda i: (selectivity(remaining[i], bound_vars), -i))
        clause = remaining.pop(best)
        next_frontier: list[dict[str, Term]] = []
        for solution in frontier:
            for triple in candidates(clause, solution):
                merged = unify(clause, triple, solution)
                if merged is not None:
                    next_frontier.append(merged)
        frontier = next_frontier
        for slot in (clause.subject, clause.predicate, clause.object):
            if isinstance(slot, Var):
                bound_vars.add(slot.name)
        if not frontier:
            break

    variables = tuple(select) if select is not None else pattern.variables()
    rows = {tuple(solution[name] for name in variables) for solution in frontier}
    ordered = tuple(sorted(rows, key=lambda row: tuple(serialize_term(t) for t in row)))
    return BindingSet(variables=variables, rows=ordered)


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------


def _sorted_rows(rows) -> list[tuple]:
    return sorted(rows, key=lambda row: tuple(x or "" for x in row))


@dataclass(frozen=True)
class CompletenessReport:
    """Projections of the three completeness queries, as IRI string pairs."""

    graph_members: frozenset[tuple[str, str]]
    structure_links: frozenset[tuple[str, str]]
    property_links: frozenset[tuple[str, str]]

    def to_lines(self) -> list[str]:
        lines = [f"graph_member\t{g}\t{m}" for g, m in _sorted_rows(self.graph_members)]
        lines += [f"structure\t{a}\t{b}" for a, b in _sorted_rows(self.structure_links)]
        lines += [f"property\t{a}\t{b}" for a, b in _sorted_rows(self.property_links)]
        return lines

    def to_dict(self) -> dict:
        return {
            "graph_members": [list(row) for row in _sorted_rows(self.graph_members)],
            "structure_links": [list(row) for row in _sorted_rows(self.structure_links)],
            "property_links": [list(row) for row in _sorted_rows(self.property_links)],
        }


#: One recovered connection: relationship, input object, output object,
#: plus the bound input/output point when the endpoint is a port.
ConnectionRow = tuple[str, str, str, Optional[str], Optional[str]]


@dataclass(frozen=True)
class LogicReport:
    connections: frozenset[ConnectionRow]
    directions: frozenset[tuple[str, str, str]]

    def to_lines(self) -> list[str]:
        lines = [
            f"connection\t{rel}\t{i}\t{o}\t{pi or '-'}\t{po or '-'}"
            for rel, i, o, pi, po in _sorted_rows(self.connections)
        ]
        lines += [f"direction\t{g}\t{rel}\t{i}" for g, rel, i in _sorted_rows(self.directions)]
        return lines

    def to_dict(self) -> dict:
        return {
            "connections": [list(row) for row in _sorted_rows(self.connections)],
            "directions": [list(row) for row in _sorted_rows(self.directions)],
        }


def completeness_report(ts: TripleSet, vocab: Vocabulary = DEFAULT_VOCABULARY) -> CompletenessReport:
    """Run the three completeness queries over an exported store."""
    g, m, o, p, r, ro, owner, prop = (Var(n) for n in ("g", "m", "o", "p", "r", "ro", "owner", "prop"))

    def pairs(subject: Var, predicate: Iri, obj: Var) -> set[tuple[str, str]]:
        result = match(ts, Pattern((TriplePattern(subject, predicate, obj),)))
        return {(row[0].value, row[1].value) for row in result.rows}

    graph_members = pairs(g, vocab.graph_including_object, m) | pairs(g, vocab.graph_including_relationship, m)
    structure_links = pairs(o, vocab.link_object_and_point, p) | pairs(r, vocab.link_relationship_and_role, ro)
    property_links = pairs(owner, vocab.has_property, prop)
    return CompletenessReport(
        graph_members=frozenset(graph_members),
        structure_links=frozenset(structure_links),
        property_links=frozenset(property_links),
    )


def logic_report(ts: TripleSet, vocab: Vocabulary = DEFAULT_VOCABULARY) -> LogicReport:
    """Recover connections and their directions from an exported store.

    The conjunction joins two connector individuals of the same graph
    over their shared relationship and the ``connect`` triple between
    them; the input is the start connector's object, the output the end
    connector's. Port-bound endpoints surface through their owning
    object, with the point retained in the auxiliary columns.
    """
    g, c1, c2, rel, obj_in, obj_out = (Var(n) for n in ("g", "c1", "c2", "rel", "in", "out"))
    conjunction = Pattern(
        (
            TriplePattern(g, vocab.graph_including_connector, c1),
            TriplePattern(g, vocab.graph_including_connector, c2),
            TriplePattern(c1, vocab.link_from_relationship, rel),
            TriplePattern(c2, vocab.link_from_relationship, rel),
            TriplePattern(c1, vocab.link_to_object, obj_in),
            TriplePattern(c2, vocab.link_to_object, obj_out),
            TriplePattern(c1, vocab.connect, c2),
        )
    )
    solutions = match(ts, conjunction, select=("g", "c1", "c2", "rel", "in", "out"))

    bound_points: dict[str, str] = {}
    point_rows = match(ts, Pattern((TriplePattern(c1, vocab.role_binding_point, Var("p")),)))
    for row in point_rows.rows:
        bound_points[row[0].value] = row[1].value

    connections: set[ConnectionRow] = set()
    directions: set[tuple[str, str, str]] = set()
    for solution in solutions:
        start, end = solution["c1"].value, solution["c2"].value
        row = (
            solution["rel"].value,
            solution["in"].value,
            solution["out"].value,
            bound_points.get(start),
            bound_points.get(end),
        )
        connections.add(row)
        directions.add((solution["g"].value, solution["rel"].value, solution["in"].value))
    return LogicReport(connections=frozenset(connections), directions=frozenset(directions))


# ---------------------------------------------------------------------------
# Verification against the model-side ground truth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionDiff:
    missing: tuple[tuple, ...]
    extra: tuple[tuple, ...]

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra


@dataclass(frozen=True)
class VerificationDiff:
    graph_members: SectionDiff
    structure_links: SectionDiff
    property_links: SectionDiff
    connections: SectionDiff
    directions: SectionDiff

    @property
    def empty(self) -> bool:
        return all(
            section.empty
            for section in (
                self.graph_members,
                self.structure_links,
                self.property_links,
                self.connections,
                self.directions,
            )
        )

    def _sections(self) -> list[tuple[str, SectionDiff]]:
        return [
            ("graph_member", self.graph_members),
            ("structure", self.structure_links),
            ("property", self.property_links),
            ("connection", self.connections),
            ("direction", self.directions),
        ]

    def to_lines(self) -> list[str]:
        lines = []
        for name, section in self._sections():
            for row in section.missing:
                lines.append(f"missing\t{name}\t" + "\t".join(x or "-" for x in row))
            for row in section.extra:
                lines.append(f"extra\t{name}\t" + "\t".join(x or "-" for x in row))
        return lines

    def to_dict(self) -> dict:
        return {
            name: {
                "missing": [list(row) for row in section.missing],
                "extra": [list(row) for row in section.extra],
            }
            for name, section in self._sections()
        }


def _diff(expected: set, got: frozenset) -> SectionDiff:
    return SectionDiff(
        missing=tuple(_sorted_rows(expected - got)),
        extra=tuple(_sorted_rows(got - expected)),
    )


def verify(m: Model, mm: MetaModel, ts: TripleSet, vocab: Vocabulary = DEFAULT_VOCABULARY) -> VerificationDiff:
    """Diff both query suites against what the model itself asserts.

    An empty diff means the store reproduces every membership,
    structure and property fact and every connection with its direction.
    """
    mint = vocab.individual_iri
    graph = mint(m.graph_type, m.graph_id).value
    type_of = {m.graph_id: m.graph_type}
    for group in (m.objects, m.relationships, m.points, m.roles):
        for inst in group:
            type_of[inst.id] = inst.type_name

    def iri(ident: str) -> str:
        return mint(type_of[ident], ident).value

    expected_members = {(graph, iri(o.id)) for o in m.objects}
    expected_members |= {(graph, iri(r.id)) for r in m.relationships}
    expected_structure = {(iri(p.owner), iri(p.id)) for p in m.points}
    expected_structure |= {(iri(ro.owner), iri(ro.id)) for ro in m.roles}
    expected_props = {(iri(pv.owner), mint(pv.type_name, pv.id).value) for pv in m.property_values}

    expected_connections: set[ConnectionRow] = set()
    expected_directions: set[tuple[str, str, str]] = set()
    for conn in m.connections:
        rel = iri(conn.relationship)
        start_obj = iri(conn.start.endpoint_object)
        end_obj = iri(conn.end.endpoint_object)
        start_pt = iri(conn.start.endpoint_point) if conn.start.endpoint_point else None
        end_pt = iri(conn.end.endpoint_point) if conn.end.endpoint_point else None
        expected_connections.add((rel, start_obj, end_obj, start_pt, end_pt))
        expected_directions.add((graph, rel, start_obj))

    completeness = completeness_report(ts, vocab)
    logic = logic_report(ts, vocab)

    return VerificationDiff(
        graph_members=_diff(expected_members, completeness.graph_members),
        structure_links=_diff(expected_structure, completeness.structure_links),
        property_links=_diff(expected_props, completeness.property_links),
        connections=_diff(expected_connections, logic.connections),
        directions=_diff(expected_directions, logic.directions),
    )
