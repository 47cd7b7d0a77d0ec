"""Hypothesis strategies for terms, triples and graphs."""

from __future__ import annotations

import string

from hypothesis import strategies as st

from tifsem.graph import XSD_NS, BlankNode, Graph, IRI, Literal, Triple

_safe_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)),
    max_size=30,
)

_iri_local = st.text(alphabet=string.ascii_letters + string.digits + "._-~", min_size=1, max_size=12)

iris = st.builds(lambda local: IRI("http://example.org/t/" + local), _iri_local)

blank_nodes = st.builds(
    BlankNode,
    st.text(alphabet=string.ascii_letters + string.digits + "_", min_size=1, max_size=10),
)

_lang_tags = st.from_regex(r"[a-z]{2}(-[A-Z]{2})?", fullmatch=True)

plain_literals = st.builds(Literal, _safe_text)
typed_literals = st.builds(
    Literal,
    _safe_text,
    st.sampled_from([XSD_NS + "decimal", XSD_NS + "integer", XSD_NS + "date", "http://example.org/dt"]),
)
lang_literals = st.builds(lambda lex, lang: Literal(lex, language=lang), _safe_text, _lang_tags)
numeric_literals = st.builds(
    lambda n: Literal(str(n), XSD_NS + "decimal"),
    st.decimals(allow_nan=False, allow_infinity=False, places=3, min_value=-10**6, max_value=10**6),
)

literals = st.one_of(plain_literals, typed_literals, lang_literals, numeric_literals)
terms = st.one_of(iris, blank_nodes, literals)
subjects = st.one_of(iris, blank_nodes)

triples = st.builds(Triple, subjects, iris, terms)


@st.composite
def graphs(draw, max_size: int = 40) -> Graph:
    return Graph(draw(st.lists(triples, max_size=max_size)))


# ---------------------------------------------------------------------------
# Seeded random (graph, query) cases for oracle-equivalence checks.

import random  # noqa: E402
from decimal import Decimal  # noqa: E402

from tifsem.graph import RDF_TYPE  # noqa: E402
from tifsem.ontology import LATITUDE_PROP, LONGITUDE_PROP  # noqa: E402
from tifsem.query import Compare, DistanceWithin, GroupCount, OrderSpec, Query, TriplePattern, Var  # noqa: E402
from tifsem.serialize import term_to_ntriples  # noqa: E402

_XSD_INTEGER = XSD_NS + "integer"
_XSD_DECIMAL = XSD_NS + "decimal"


def random_case(rng: random.Random, max_triples: int = 200) -> tuple[Graph, Query]:
    """One seeded (graph, query) pair: <= ``max_triples`` triples, 1..3
    patterns, at most one filter.  Numeric comparisons only ever see numeric
    bindings; distance filters only ever see coordinate-bearing nodes."""
    g = Graph()
    subjects = [IRI(f"http://g/s{i}") for i in range(12)]
    plain_preds = [IRI(f"http://g/p{i}") for i in range(4)]
    num_pred = IRI("http://g/amount")
    place_type = IRI("http://g/Place")
    rdf_type = IRI(RDF_TYPE)
    words = ["alpha", "beta", "gamma", "delta"]

    place_nodes = [IRI(f"http://g/place{i}") for i in range(rng.randint(0, 5))]
    for node in place_nodes:
        g.insert(Triple(node, rdf_type, place_type))
        lat = Decimal(f"{46 + rng.uniform(-0.02, 0.02):.5f}")
        lon = Decimal(f"{-1 + rng.uniform(-0.02, 0.02):.5f}")
        g.insert(Triple(node, IRI(LATITUDE_PROP), Literal(str(lat), _XSD_DECIMAL)))
        g.insert(Triple(node, IRI(LONGITUDE_PROP), Literal(str(lon), _XSD_DECIMAL)))

    for _ in range(rng.randint(0, max_triples - len(g))):
        subject = rng.choice(subjects + place_nodes)
        roll = rng.random()
        if roll < 0.25:
            g.insert(Triple(subject, num_pred, Literal(str(rng.randint(0, 40)), _XSD_INTEGER)))
        elif roll < 0.55:
            g.insert(Triple(subject, rng.choice(plain_preds), Literal(rng.choice(words))))
        else:
            g.insert(Triple(subject, rng.choice(plain_preds), rng.choice(subjects)))

    ordered = sorted(g, key=lambda t: (term_to_ntriples(t.subject), term_to_ntriples(t.predicate),
                                       term_to_ntriples(t.object)))
    var_pool = [Var("v0"), Var("v1"), Var("v2")]

    def patterns_from_graph(count: int) -> list[TriplePattern]:
        out = []
        for _ in range(count):
            t = rng.choice(ordered)
            s = rng.choice(var_pool) if rng.random() < 0.8 else t.subject
            p = rng.choice(var_pool) if rng.random() < 0.15 else t.predicate
            o = rng.choice(var_pool) if rng.random() < 0.6 else t.object
            out.append(TriplePattern(s, p, o))
        return out

    filters = []
    roll = rng.random()
    if roll < 0.25 and len(place_nodes) >= 1:
        patterns = [
            TriplePattern(Var("v0"), rdf_type, place_type),
            TriplePattern(Var("v1"), rdf_type, place_type),
        ]
        filters.append(DistanceWithin(Var("v0"), Var("v1"), rng.choice([200.0, 900.0, 2500.0])))
    elif roll < 0.5 and ordered:
        patterns = patterns_from_graph(rng.randint(1, 2))
        patterns.append(TriplePattern(rng.choice(var_pool[:2]), num_pred, Var("v2")))
        filters.append(Compare(Var("v2"), rng.choice(["<", "<=", ">", ">=", "=", "!="]),
                               Literal(str(rng.randint(0, 40)), _XSD_INTEGER)))
    elif ordered:
        patterns = patterns_from_graph(rng.randint(1, 3))
        loose_vars = sorted(set().union(*(p.variables() for p in patterns)))
        if loose_vars and rng.random() < 0.5:
            constant = rng.choice(ordered).object
            filters.append(Compare(Var(rng.choice(loose_vars)), rng.choice(["=", "!="]), constant))
    else:
        patterns = [TriplePattern(Var("v0"), rng.choice(plain_preds), Literal("missing"))]

    pattern_vars = sorted(set().union(*(p.variables() for p in patterns)))
    if not pattern_vars:
        patterns[0] = TriplePattern(Var("v0"), patterns[0].predicate, patterns[0].object)
        pattern_vars = ["v0"]

    projection = [Var(n) for n in rng.sample(pattern_vars, rng.randint(1, len(pattern_vars)))]
    group_count = None
    if rng.random() < 0.3:
        group_count = GroupCount(Var(rng.choice(pattern_vars)), Var("cnt"))

    order_by = None
    roll = rng.random()
    if roll < 0.3 and group_count is not None:
        order_by = OrderSpec(Var("cnt"), ascending=rng.random() < 0.5)
    elif roll < 0.5:
        order_by = OrderSpec(Var(rng.choice([v.name for v in projection])), ascending=rng.random() < 0.5)

    limit = rng.choice([None, None, None, 0, 1, 3, 10])
    query = Query(
        projection=projection,
        patterns=patterns,
        filters=filters,
        group_count=group_count,
        order_by=order_by,
        limit=limit,
    )
    return g, query
