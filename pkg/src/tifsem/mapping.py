"""Two-level alignment between the granule vocabulary and Schema.org.

Concept-level rules (EquivalentClass, SubClassOf) retype nodes; property-level
rules (EquivalentProperty, SubPropertyOf) mirror statements.  Materialization
writes the inferred triples into the store eagerly, to a fixed point, so
downstream exports carry the Schema.org annotations without query-time
inference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from tifsem.errors import RuleError
from tifsem.graph import Graph, IRI, RDF_NS, RDF_TYPE, Triple
from tifsem.ontology import (
    GranuleKind,
    OntologySnapshot,
    SCHEMA_ADDRESS,
    SCHEMA_LATITUDE,
    SCHEMA_LONGITUDE,
    SCHEMA_NS,
    TIFSEM_NS,
    class_of,
    load_core_ontology,
)

_PREFIXES = {"tifsem": TIFSEM_NS, "schema": SCHEMA_NS, "rdf": RDF_NS}


class Relation(str, Enum):
    EQUIVALENT_CLASS = "EquivalentClass"
    SUB_CLASS_OF = "SubClassOf"
    EQUIVALENT_PROPERTY = "EquivalentProperty"
    SUB_PROPERTY_OF = "SubPropertyOf"


_CLASS_RELATIONS = {Relation.EQUIVALENT_CLASS, Relation.SUB_CLASS_OF}
_PROPERTY_RELATIONS = {Relation.EQUIVALENT_PROPERTY, Relation.SUB_PROPERTY_OF}


@dataclass(frozen=True)
class MappingRule:
    source: str
    target: str
    relation: Relation


@dataclass
class MappingReport:
    inferred_triples: int
    unmapped_sources: set[str] = field(default_factory=set)
    inconsistencies: list[str] = field(default_factory=list)


def _rule(kind: GranuleKind, target: str, relation: Relation) -> MappingRule:
    return MappingRule(class_of(kind), SCHEMA_NS + target, relation)


def builtin_rules() -> list[MappingRule]:
    """The shipped alignment: one class rule per aligned granule (two for the
    two-target granules, equivalence toward the general target and subclass
    toward the specific one), plus the geolocation property rules."""
    snapshot = load_core_ontology()
    geo = snapshot.granule_schemas[GranuleKind.GEOLOCATIONS]
    return [
        _rule(GranuleKind.MULTIMEDIA, "MediaObject", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.CLASSIFICATIONS, "Rating", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.CONTACTS, "ContactPoint", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.LEGAL_INFORMATION, "Organization", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.LANGUAGES, "Language", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.GEOLOCATIONS, "Place", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.RESERVATION_MODES, "Reservation", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.RESERVATION_MODES, "LodgingReservation", Relation.SUB_CLASS_OF),
        _rule(GranuleKind.PRICES, "Offer", Relation.EQUIVALENT_CLASS),
        _rule(GranuleKind.PRICES, "PriceSpecification", Relation.SUB_CLASS_OF),
        MappingRule(geo.predicate("AddressLine1"), SCHEMA_ADDRESS, Relation.SUB_PROPERTY_OF),
        MappingRule(geo.predicate("AddressLine2"), SCHEMA_ADDRESS, Relation.SUB_PROPERTY_OF),
        MappingRule(geo.predicate("Latitude"), SCHEMA_LATITUDE, Relation.EQUIVALENT_PROPERTY),
        MappingRule(geo.predicate("Longitude"), SCHEMA_LONGITUDE, Relation.EQUIVALENT_PROPERTY),
    ]


def target_classes(source: str, rules: Optional[Sequence[MappingRule]] = None) -> set[str]:
    """Schema.org classes a source class maps to under class-level rules."""
    rules = builtin_rules() if rules is None else rules
    return {r.target for r in rules if r.source == source and r.relation in _CLASS_RELATIONS}


def _expand(name: str) -> str:
    if "://" in name:
        return name
    prefix, sep, local = name.partition(":")
    if sep and prefix in _PREFIXES:
        return _PREFIXES[prefix] + local
    return name


def _compact(iri: str) -> str:
    for prefix, ns in _PREFIXES.items():
        if iri.startswith(ns):
            return f"{prefix}:{iri[len(ns):]}"
    return iri


def _check_rule_kinds(rule: MappingRule, snapshot: OntologySnapshot) -> Optional[str]:
    is_class = {iri: iri in snapshot.concepts for iri in (rule.source, rule.target)}
    is_prop = {iri: iri in snapshot.properties for iri in (rule.source, rule.target)}
    for iri in (rule.source, rule.target):
        if not is_class[iri] and not is_prop[iri]:
            return f"unknown term {iri}"
    if rule.relation in _CLASS_RELATIONS:
        if not (is_class[rule.source] and is_class[rule.target]):
            return f"{rule.relation.value} requires two class IRIs: {rule.source} -> {rule.target}"
    else:
        if not (is_prop[rule.source] and is_prop[rule.target]):
            return f"{rule.relation.value} requires two property IRIs: {rule.source} -> {rule.target}"
    return None


def load_rules(document: str, snapshot: Optional[OntologySnapshot] = None) -> list[MappingRule]:
    """Parse a JSON rule document: an array of {source, target, relation}.

    Relation names are the four exact enum values; terms may be absolute IRIs
    or tifsem:/schema: prefixed names, and must be known to the snapshot.
    """
    snapshot = snapshot or load_core_ontology()
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise RuleError(f"rules document is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise RuleError("rules document must be a JSON array")

    rules: list[MappingRule] = []
    seen: set[tuple[str, str, Relation]] = set()
    for index, entry in enumerate(data):
        if not isinstance(entry, dict) or set(entry) != {"source", "target", "relation"}:
            raise RuleError(f"rule #{index}: expected keys source, target, relation")
        try:
            relation = Relation(entry["relation"])
        except ValueError:
            raise RuleError(f"rule #{index}: unknown relation {entry['relation']!r}")
        rule = MappingRule(_expand(entry["source"]), _expand(entry["target"]), relation)
        problem = _check_rule_kinds(rule, snapshot)
        if problem:
            raise RuleError(f"rule #{index}: {problem}")
        key = (rule.source, rule.target, rule.relation)
        if key in seen:
            raise RuleError(f"rule #{index}: duplicate rule {key}")
        seen.add(key)
        rules.append(rule)
    return rules


def save_rules(rules: Iterable[MappingRule]) -> str:
    payload = [
        {"source": _compact(r.source), "target": _compact(r.target), "relation": r.relation.value}
        for r in rules
    ]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _closure_maps(rules: Sequence[MappingRule]) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    """Per-term reachability over the rule graph, equivalences both ways."""
    class_edges: dict[str, set[str]] = {}
    prop_edges: dict[str, set[str]] = {}
    for rule in rules:
        edges = class_edges if rule.relation in _CLASS_RELATIONS else prop_edges
        edges.setdefault(rule.source, set()).add(rule.target)
        if rule.relation in (Relation.EQUIVALENT_CLASS, Relation.EQUIVALENT_PROPERTY):
            edges.setdefault(rule.target, set()).add(rule.source)

    def close(edges: dict[str, set[str]]) -> dict[str, set[str]]:
        closed: dict[str, set[str]] = {}
        for start in edges:
            reached: set[str] = set()
            stack = [start]
            while stack:
                node = stack.pop()
                for nxt in edges.get(node, ()):
                    if nxt != start and nxt not in reached:
                        reached.add(nxt)
                        stack.append(nxt)
            closed[start] = reached
        return closed

    return close(class_edges), close(prop_edges)


def materialize(g: Graph, rules: Optional[Sequence[MappingRule]] = None) -> MappingReport:
    """Write every rule-implied triple into the graph, to a fixed point.

    Only adds statements, never removes; running it twice adds nothing.
    ``unmapped_sources`` collects granule classes and field properties that
    occur in the graph but have no applicable rule.
    """
    rules = builtin_rules() if rules is None else rules
    snapshot = load_core_ontology()
    class_closure, prop_closure = _closure_maps(rules)
    rdf_type = IRI(RDF_TYPE)

    inferred = 0
    unmapped: set[str] = set()
    structural = {RDF_TYPE, TIFSEM_NS + "hasGranule"}
    granule_classes = {class_of(k) for k in GranuleKind}

    while True:
        added = 0
        for t in list(g.match(predicate=rdf_type)):
            if not isinstance(t.object, IRI):
                continue
            targets = class_closure.get(t.object.value)
            if targets is None:
                if t.object.value in granule_classes:
                    unmapped.add(t.object.value)
                continue
            for target in targets:
                added += g.insert(Triple(t.subject, rdf_type, IRI(target)))

        for t in list(g):
            pred = t.predicate.value
            targets = prop_closure.get(pred)
            if targets is None:
                if pred in snapshot.properties and pred.startswith(TIFSEM_NS) and pred not in structural:
                    unmapped.add(pred)
                continue
            for target in targets:
                added += g.insert(Triple(t.subject, IRI(target), t.object))

        inferred += added
        if added == 0:
            break

    return MappingReport(inferred_triples=inferred, unmapped_sources=unmapped)


def check_consistency(
    rules: Sequence[MappingRule],
    snapshot: Optional[OntologySnapshot] = None,
) -> list[str]:
    """Report kind mismatches, class rules rooted outside the granule
    vocabulary, and granules the rule set leaves unaligned."""
    snapshot = snapshot or load_core_ontology()
    report: list[str] = []
    granule_classes = {class_of(k): k for k in GranuleKind}

    for rule in rules:
        problem = _check_rule_kinds(rule, snapshot)
        if problem:
            report.append(f"kind mismatch: {problem}")
            continue
        if rule.relation in _CLASS_RELATIONS and rule.source.startswith(TIFSEM_NS):
            if rule.source not in granule_classes:
                report.append(f"source of {rule.relation.value} rule is not a granule class: {rule.source}")

    covered = {rule.source for rule in rules if rule.relation in _CLASS_RELATIONS}
    for kind in GranuleKind:
        if class_of(kind) not in covered:
            report.append(f"granule {kind.value} has no Schema.org mapping")
    return report
