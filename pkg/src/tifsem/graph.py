"""In-memory triple store with subject/predicate/object indexes.

Build phase (insert, assert) requires exclusive access; once built, a graph
can be read concurrently without restriction.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Iterator, Optional, Union
from urllib.parse import quote

from tifsem import ontology
from tifsem.errors import IoAssertionError
from tifsem.ontology import (
    GeoPoint,
    GranuleKind,
    InformationObject,
    IoRef,
    class_of,
    decimal_lexical,
    load_core_ontology,
)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDF_LANG_STRING = RDF_NS + "langString"
XSD_STRING = XSD_NS + "string"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_INTEGER = XSD_NS + "integer"
XSD_DATE = XSD_NS + "date"

DEFAULT_BASE_IRI = "http://example.org/tifsem"

# Characters an IRI may never contain (IRIREF production).
_IRI_FORBIDDEN = set(' <>"{}|^`\\')


@dataclass(frozen=True)
class IRI:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")
        for ch in self.value:
            if ch in _IRI_FORBIDDEN or ord(ch) <= 0x20:
                raise ValueError(f"IRI contains forbidden character {ch!r}: {self.value!r}")


@dataclass(frozen=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label or not all(c.isalnum() or c == "_" for c in self.label):
            raise ValueError(f"blank node label must be [A-Za-z0-9_]+: {self.label!r}")


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANG_STRING)
            elif self.datatype != RDF_LANG_STRING:
                raise ValueError("language tag requires the language-string datatype")
        elif self.datatype == RDF_LANG_STRING:
            raise ValueError("language-string literal requires a language tag")


Term = Union[IRI, BlankNode, Literal]
Subject = Union[IRI, BlankNode]


@dataclass(frozen=True)
class Triple:
    subject: Subject
    predicate: IRI
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (IRI, BlankNode)):
            raise TypeError("subject must be an IRI or blank node")
        if not isinstance(self.predicate, IRI):
            raise TypeError("predicate must be an IRI")
        if not isinstance(self.object, (IRI, BlankNode, Literal)):
            raise TypeError("object must be a term")


class Graph:
    """A set of triples with one index per position."""

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_subject: dict[Subject, set[Triple]] = {}
        self._by_predicate: dict[IRI, set[Triple]] = {}
        self._by_object: dict[Term, set[Triple]] = {}
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True only if it was not already present."""
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_subject.setdefault(t.subject, set()).add(t)
        self._by_predicate.setdefault(t.predicate, set()).add(t)
        self._by_object.setdefault(t.object, set()).add(t)
        return True

    def match(
        self,
        subject: Optional[Subject] = None,
        predicate: Optional[IRI] = None,
        object: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Yield triples agreeing with every bound position."""
        if subject is not None:
            candidates = self._by_subject.get(subject, ())
        elif object is not None:
            candidates = self._by_object.get(object, ())
        elif predicate is not None:
            candidates = self._by_predicate.get(predicate, ())
        else:
            candidates = self._triples
        for t in candidates:
            if subject is not None and t.subject != subject:
                continue
            if predicate is not None and t.predicate != predicate:
                continue
            if object is not None and t.object != object:
                continue
            yield t


def mint_io_iri(base: str, io_id: str) -> IRI:
    return IRI(f"{base.rstrip('/')}/io/{quote(io_id, safe='')}")


def _escape_label_part(text: str) -> str:
    # Injective: alphanumerics map to themselves, everything else to _hh.
    return "".join(c if c.isalnum() and c.isascii() else f"_{ord(c):02x}" for c in text)


def granule_node(io_id: str, kind: GranuleKind, ordinal: int) -> BlankNode:
    """Deterministic blank node for one granule instance."""
    return BlankNode(f"{_escape_label_part(io_id)}_{kind.value}_{ordinal}")


def _field_object(value, base: str) -> Literal | IRI:
    if isinstance(value, str):
        return Literal(value)
    if isinstance(value, Decimal):
        return Literal(decimal_lexical(value), XSD_DECIMAL)
    if isinstance(value, datetime.date):
        return Literal(value.isoformat(), XSD_DATE)
    if isinstance(value, IoRef):
        return mint_io_iri(base, value.io_id)
    raise TypeError(f"unsupported field value: {value!r}")


def assert_io(g: Graph, io: InformationObject, base: str = DEFAULT_BASE_IRI) -> int:
    """Integrate one information object into the graph.

    Emits the IO type triple, one blank node per granule instance (typed with
    the granule class and linked via ``tifsem:hasGranule``), one triple per
    field, and the latitude/longitude pair for geopoint fields.  Blank node
    labels depend only on (io id, kind, ordinal), so re-asserting the same IO
    adds nothing.

    Raises :class:`IoAssertionError` if the IO carries error-level validation
    issues.
    """
    from tifsem.ingest import validate_io  # deferred: ingest imports this module

    errors = [i for i in validate_io(io) if i.severity == "error"]
    if errors:
        detail = "; ".join(f"{i.field_path}: {i.message}" for i in errors)
        raise IoAssertionError(f"IO {io.id!r} failed validation: {detail}")

    snapshot = load_core_ontology()
    added = 0
    io_iri = mint_io_iri(base, io.id)
    added += g.insert(Triple(io_iri, IRI(RDF_TYPE), IRI(ontology.IO_CLASS)))

    for kind, instances in io.granules.items():
        schema = snapshot.granule_schemas[kind]
        for ordinal, granule in enumerate(instances):
            node = granule_node(io.id, kind, ordinal)
            added += g.insert(Triple(io_iri, IRI(ontology.HAS_GRANULE), node))
            added += g.insert(Triple(node, IRI(RDF_TYPE), IRI(class_of(kind))))
            for path, value in granule.fields.items():
                if isinstance(value, GeoPoint):
                    lat = Literal(decimal_lexical(value.latitude), XSD_DECIMAL)
                    lon = Literal(decimal_lexical(value.longitude), XSD_DECIMAL)
                    added += g.insert(Triple(node, IRI(ontology.LATITUDE_PROP), lat))
                    added += g.insert(Triple(node, IRI(ontology.LONGITUDE_PROP), lon))
                    continue
                if snapshot.has_path(path):
                    predicate = IRI(snapshot.predicate_for(path))
                else:  # extension field, keyed by its own IRI
                    predicate = IRI(path)
                added += g.insert(Triple(node, predicate, _field_object(value, base)))

    for ext_iri, text in io.extensions.items():
        added += g.insert(Triple(io_iri, IRI(ext_iri), Literal(text)))
    return added
