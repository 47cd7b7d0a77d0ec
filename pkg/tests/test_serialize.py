from __future__ import annotations

import json
import random
import re

import pytest
from hypothesis import given, settings

import strategies as own
from oracles import blank_closure, expand_jsonld, structural_form
from tifsem.errors import ExportError, NTriplesParseError
from tifsem.graph import (
    RDF_TYPE,
    RDFS_NS,
    BlankNode,
    Graph,
    IRI,
    Literal,
    Triple,
)
from tifsem.graph import mint_io_iri
from tifsem.ontology import IO_CLASS, load_core_ontology
from tifsem.serialize import (
    DEFAULT_PREFIXES,
    from_ntriples,
    ontology_to_graph,
    to_jsonld,
    to_ntriples,
    to_turtle,
)


class TestNTriplesWrite:
    def test_empty_graph_is_empty_text(self):
        assert to_ntriples(Graph()) == ""

    def test_single_triple_single_line(self):
        g = Graph([Triple(IRI("http://e/s"), IRI("http://e/p"), Literal("x"))])
        text = to_ntriples(g)
        lines = text.splitlines()
        assert len(lines) == 1
        assert lines[0].endswith(" .")
        assert text.endswith(".\n")

    def test_output_is_sorted(self):
        rng = random.Random(3)
        triples = [
            Triple(IRI(f"http://e/s{rng.randrange(20)}"), IRI(f"http://e/p{rng.randrange(5)}"),
                   Literal(str(rng.randrange(50))))
            for _ in range(100)
        ]
        lines = to_ntriples(Graph(triples)).splitlines()
        assert lines == sorted(lines)

    def test_escapes(self):
        g = Graph([Triple(IRI("http://e/s"), IRI("http://e/p"), Literal('a"b\\c\nd\te'))])
        text = to_ntriples(g)
        assert '"a\\"b\\\\c\\nd\\te"' in text

    def test_ascii_only_flag(self):
        g = Graph([Triple(IRI("http://e/s"), IRI("http://e/p"), Literal("Hôtel 🏨"))])
        text = to_ntriples(g, ascii_only=True)
        assert text == text.encode("ascii", errors="strict").decode("ascii")
        assert "\\u00F4" in text and "\\U0001F3E8" in text
        assert from_ntriples(text) == g


class TestNTriplesRead:
    def test_empty_text(self):
        assert len(from_ntriples("")) == 0

    def test_missing_dot_reports_line(self):
        text = '<http://e/s> <http://e/p> "x" .\n<http://e/s> <http://e/p> "y"\n'
        with pytest.raises(NTriplesParseError) as err:
            from_ntriples(text)
        assert err.value.line == 2

    def test_duplicates_collapse(self):
        line = '<http://e/s> <http://e/p> "x" .\n'
        assert len(from_ntriples(line * 3)) == 1

    def test_comments_and_blank_lines(self):
        text = '# header\n\n<http://e/s> <http://e/p> <http://e/o> . # trailing\n'
        assert len(from_ntriples(text)) == 1

    def test_literal_subject_rejected(self):
        with pytest.raises(NTriplesParseError):
            from_ntriples('"x" <http://e/p> <http://e/o> .\n')

    def test_blank_node_predicate_rejected(self):
        with pytest.raises(NTriplesParseError):
            from_ntriples('<http://e/s> _:b <http://e/o> .\n')

    def test_language_and_datatype_forms(self):
        text = (
            '<http://e/s> <http://e/p> "chat"@fr .\n'
            '<http://e/s> <http://e/p> "5"^^<http://www.w3.org/2001/XMLSchema#decimal> .\n'
        )
        g = from_ntriples(text)
        objects = {t.object for t in g}
        assert Literal("chat", language="fr") in objects
        assert Literal("5", "http://www.w3.org/2001/XMLSchema#decimal") in objects

    def test_unicode_escapes(self):
        g = from_ntriples('<http://e/s> <http://e/p> "H\\u00F4tel \\U0001F3E8" .\n')
        assert next(iter(g)).object.lexical == "Hôtel 🏨"


class TestRoundTrip:
    @given(own.graphs(max_size=50))
    @settings(max_examples=200, deadline=None)
    def test_parse_serialize_identity(self, g):
        assert from_ntriples(to_ntriples(g)) == g

    @given(own.graphs(max_size=30))
    @settings(max_examples=100, deadline=None)
    def test_canonical_determinism(self, g):
        clone = Graph(list(g.triples))
        assert to_ntriples(clone) == to_ntriples(g)


def expand_turtle(text: str) -> Graph:
    """Re-parse Turtle output through the N-Triples reader by expanding
    prefixed names token-wise (strings stay untouched)."""
    prefixes: dict[str, str] = {}
    body_lines = []
    # split strictly on \n: literals may legally contain other line separators
    for line in text.split("\n"):
        m = re.match(r"@prefix ([A-Za-z][\w-]*): <([^>]*)> \.$", line)
        if m:
            prefixes[m.group(1)] = m.group(2)
        elif line.strip():
            body_lines.append(line)

    token_re = re.compile(
        r'(<[^>]*>|_:[A-Za-z0-9_]+|"(?:[^"\\]|\\.)*"(?:@[A-Za-z0-9-]+|\^\^(?:<[^>]*>|[\w-]+:[\w.-]*))?'
        r"|[\w-]+:[\w.-]*|\.)"
    )

    def expand(token: str) -> str:
        if token.startswith(("<", '"', "_:")) or token == ".":
            if "^^" in token and not token.endswith(">"):
                body, _, dt = token.rpartition("^^")
                prefix, _, local = dt.partition(":")
                return f"{body}^^<{prefixes[prefix]}{local}>"
            return token
        prefix, _, local = token.partition(":")
        return f"<{prefixes[prefix]}{local}>"

    nt_lines = []
    for line in body_lines:
        tokens = token_re.findall(line)
        assert tokens and tokens[-1] == ".", line
        nt_lines.append(" ".join(expand(t) for t in tokens[:-1]) + " .")
    return from_ntriples("\n".join(nt_lines) + "\n")


class TestTurtle:
    def test_empty_graph_has_only_prefixes(self):
        text = to_turtle(Graph())
        lines = [l for l in text.splitlines() if l.strip()]
        assert all(l.startswith("@prefix") for l in lines)

    def test_round_trip_via_ntriples_detour(self, la_rochelle_graph):
        assert expand_turtle(to_turtle(la_rochelle_graph)) == la_rochelle_graph

    def test_prefixed_graph_has_no_absolute_iris_in_body(self):
        g = Graph([
            Triple(IRI("http://e/ns#a"), IRI("http://e/ns#b"), IRI("http://e/ns#c")),
            Triple(IRI("http://e/ns#a"), IRI("http://e/ns#b"), Literal("x")),
        ])
        text = to_turtle(g, {"ex": "http://e/ns#"})
        body = [l for l in text.splitlines() if l and not l.startswith("@prefix")]
        assert body and all("<" not in line for line in body)

    @given(own.graphs(max_size=30))
    @settings(max_examples=60, deadline=None)
    def test_arbitrary_graphs_round_trip(self, g):
        assert expand_turtle(to_turtle(g)) == g


class TestJsonLd:
    def test_root_must_be_subject(self):
        with pytest.raises(ExportError):
            to_jsonld(Graph(), IRI("http://e/missing"))

    def test_bare_root_has_id_and_type_only(self):
        root = IRI("http://e/io/1")
        g = Graph([Triple(root, IRI(RDF_TYPE), IRI(IO_CLASS))])
        doc = to_jsonld(g, root)
        assert set(doc.body) == {"@id", "@type"}
        assert doc.body["@id"] == root.value
        assert doc.body["@type"] == "tifsem:InformationObject"

    def test_context_contains_schema_namespace(self, materialized_graph):
        doc = to_jsonld(materialized_graph, mint_io_iri("http://example.org/tifsem", "HOT-001"))
        assert doc.context["schema"] == "https://schema.org/"

    def test_materialized_hotel_carries_mapped_types(self, materialized_graph):
        doc = to_jsonld(materialized_graph, mint_io_iri("http://example.org/tifsem", "HOT-001"))
        rendered = json.dumps(doc.to_json())
        assert "schema:MediaObject" in rendered
        assert "schema:Place" in rendered
        assert "tifsem:Multimedia" in rendered

    def test_expansion_equals_blank_closure_on_every_fixture_io(
        self, materialized_graph, la_rochelle_ios
    ):
        for io in la_rochelle_ios:
            root = mint_io_iri("http://example.org/tifsem", io.id)
            doc = to_jsonld(materialized_graph, root)
            expanded = expand_jsonld(doc.to_json())
            closure = blank_closure(list(materialized_graph), root)
            assert structural_form(expanded, root) == structural_form(closure, root), io.id

    def test_shared_blank_node_keeps_identity(self):
        root = IRI("http://e/root")
        shared = BlankNode("shared")
        g = Graph([
            Triple(root, IRI("http://e/p1"), shared),
            Triple(root, IRI("http://e/p2"), shared),
            Triple(shared, IRI("http://e/name"), Literal("x")),
        ])
        doc = to_jsonld(g, root)
        expanded = expand_jsonld(doc.to_json())
        assert structural_form(expanded, root) == structural_form(g.triples, root)
        assert len(expanded) == 3

    def test_json_round_trip_is_stable_text(self, materialized_graph):
        root = mint_io_iri("http://example.org/tifsem", "EVT-002")
        assert to_jsonld(materialized_graph, root).to_text() == to_jsonld(materialized_graph, root).to_text()


class TestOntologyExport:
    def test_snapshot_exports_class_declarations(self):
        snapshot = load_core_ontology()
        g = ontology_to_graph(snapshot)
        class_triples = list(g.match(predicate=IRI(RDF_TYPE), object=IRI(RDFS_NS + "Class")))
        assert len(class_triples) == len(snapshot.concepts)
        subclass_links = list(g.match(predicate=IRI(RDFS_NS + "subClassOf")))
        with_parent = sum(1 for c in snapshot.concepts.values() if c.parent is not None)
        assert len(subclass_links) == with_parent

    def test_snapshot_turtle_round_trips(self):
        g = ontology_to_graph(load_core_ontology())
        assert expand_turtle(to_turtle(g)) == g
