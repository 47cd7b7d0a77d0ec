"""TIFSem domain model.

The model has one root entity, the information object (IO), composed of 18
typed granules.  This module holds the granule vocabulary, the field schema
each granule admits, the concept forest (TIFSem classes plus the Schema.org
subset the toolkit aligns against), and the value types granule fields carry.

The ontology snapshot built by :func:`load_core_ontology` is immutable and
may be shared freely across threads.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping, Optional, Union

from tifsem.errors import UnknownTermError

TIFSEM_NS = "http://example.org/tifsem/ns#"
SCHEMA_NS = "https://schema.org/"

IO_CLASS = TIFSEM_NS + "InformationObject"
HAS_GRANULE = TIFSEM_NS + "hasGranule"
LATITUDE_PROP = TIFSEM_NS + "latitude"
LONGITUDE_PROP = TIFSEM_NS + "longitude"

SCHEMA_ADDRESS = SCHEMA_NS + "address"
SCHEMA_LATITUDE = SCHEMA_NS + "latitude"
SCHEMA_LONGITUDE = SCHEMA_NS + "longitude"


class GranuleKind(str, Enum):
    """The 18 semantic units an information object is composed of."""

    DUBLIN_CORE = "DublinCore"
    UPDATE = "Update"
    MULTIMEDIA = "Multimedia"
    CONTACTS = "Contacts"
    LEGAL_INFORMATION = "LegalInformation"
    CLASSIFICATIONS = "Classifications"
    RELATED_SERVICES = "RelatedServices"
    GEOLOCATIONS = "Geolocations"
    PERIODS = "Periods"
    CUSTOMERS = "Customers"
    LANGUAGES = "Languages"
    RESERVATION_MODES = "ReservationModes"
    PRICES = "Prices"
    CAPACITY = "Capacity"
    OFFERS_SERVICES = "OffersServices"
    ADDITIONAL_DESCRIPTION = "AdditionalDescription"
    ITINERARIES = "Itineraries"
    SCHEDULES = "Schedules"


# One-line functional description per granule kind, as rendered in concept
# labels and the generated vocabulary docs.
GRANULE_DESCRIPTIONS: Mapping[GranuleKind, str] = MappingProxyType({
    GranuleKind.DUBLIN_CORE: "Core descriptive metadata: identifier, title, description, resource type.",
    GranuleKind.UPDATE: "Revision history of the record: when and by whom it last changed.",
    GranuleKind.MULTIMEDIA: "Media attached to the resource, such as photos and videos.",
    GranuleKind.CONTACTS: "How to reach the resource and who answers for it.",
    GranuleKind.LEGAL_INFORMATION: "Formal identity and registration data of the operating entity.",
    GranuleKind.CLASSIFICATIONS: "Official ratings and quality labels awarded to the resource.",
    GranuleKind.RELATED_SERVICES: "Links from this resource to other resources.",
    GranuleKind.GEOLOCATIONS: "Where the resource is: address, coordinates, surroundings.",
    GranuleKind.PERIODS: "Opening, closing and booking periods.",
    GranuleKind.CUSTOMERS: "Who the resource is aimed at: audience and visitor profile.",
    GranuleKind.LANGUAGES: "Which languages visitors can expect staff to speak.",
    GranuleKind.RESERVATION_MODES: "How to book: whether booking is required and whom to contact.",
    GranuleKind.PRICES: "Service prices and accepted payment methods.",
    GranuleKind.CAPACITY: "How many people or units the resource can host.",
    GranuleKind.OFFERS_SERVICES: "What the resource offers its visitors, on site or close by.",
    GranuleKind.ADDITIONAL_DESCRIPTION: "Free-text notes that fit no other granule.",
    GranuleKind.ITINERARIES: "Routes and outdoor activities arranged around the resource.",
    GranuleKind.SCHEDULES: "Which services are open or bookable in which time windows.",
})


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate pair; ranges are enforced at construction."""

    latitude: float
    longitude: float

    def __post_init__(self) -> None:
        lat, lon = float(self.latitude), float(self.longitude)
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise ValueError("coordinates must be finite")
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise ValueError(f"longitude {lon} outside [-180, 180]")
        object.__setattr__(self, "latitude", lat)
        object.__setattr__(self, "longitude", lon)


@dataclass(frozen=True)
class IoRef:
    """A reference from one information object to another, by id."""

    io_id: str


FieldValue = Union[str, Decimal, datetime.date, GeoPoint, IoRef]


class FieldType(Enum):
    TEXT = "text"
    DECIMAL = "decimal"
    DATE = "date"
    GEOPOINT = "geopoint"
    REF = "ref"


_PYTHON_TYPES: Mapping[FieldType, type | tuple[type, ...]] = {
    FieldType.TEXT: str,
    FieldType.DECIMAL: Decimal,
    FieldType.DATE: datetime.date,
    FieldType.GEOPOINT: GeoPoint,
    FieldType.REF: IoRef,
}


@dataclass(frozen=True)
class FieldSpec:
    """Declared type of one granule field, with optional numeric bounds."""

    type: FieldType
    minimum: Optional[Decimal] = None
    maximum: Optional[Decimal] = None

    def accepts(self, value: FieldValue) -> bool:
        expected = _PYTHON_TYPES[self.type]
        if not isinstance(value, expected):
            return False
        # date accepts date but not datetime subclass surprises
        if self.type is FieldType.DATE and isinstance(value, datetime.datetime):
            return False
        return True

    def in_bounds(self, value: Decimal) -> bool:
        if self.minimum is not None and value < self.minimum:
            return False
        if self.maximum is not None and value > self.maximum:
            return False
        return True


def _camel(field_name: str) -> str:
    return field_name[0].lower() + field_name[1:]


@dataclass(frozen=True)
class GranuleSchema:
    """Fields one granule kind admits, plus its canonical tag (the first
    segment of every canonical field path for the kind)."""

    kind: GranuleKind
    tag: str
    fields: Mapping[str, FieldSpec]

    def path(self, field_name: str) -> str:
        return f"{self.tag}/{field_name}"

    def predicate(self, field_name: str) -> str:
        return TIFSEM_NS + _camel(field_name)

    @property
    def xml_field_names(self) -> tuple[str, ...]:
        """Fields ingestable from XML text (geopoints are programmatic only)."""
        return tuple(n for n, s in self.fields.items() if s.type is not FieldType.GEOPOINT)


def _schema(kind: GranuleKind, tag: str, **fields: FieldSpec) -> GranuleSchema:
    return GranuleSchema(kind=kind, tag=tag, fields=MappingProxyType(dict(fields)))


_T = FieldSpec(FieldType.TEXT)
_D = FieldSpec(FieldType.DECIMAL)
_DATE = FieldSpec(FieldType.DATE)

# Canonical tag vocabulary.  Tags equal the granule kind name except for
# Geolocations, whose canonical element (and every path built on it) is the
# singular "Geolocation"; see docs/granule-schema.md.
GRANULE_SCHEMAS: Mapping[GranuleKind, GranuleSchema] = MappingProxyType({
    GranuleKind.DUBLIN_CORE: _schema(
        GranuleKind.DUBLIN_CORE, "DublinCore",
        Identifier=_T, Title=_T, Description=_T, Type=_T, Creator=_T, Date=_DATE,
    ),
    GranuleKind.UPDATE: _schema(
        GranuleKind.UPDATE, "Update",
        LastModified=_DATE, UpdatedBy=_T,
    ),
    GranuleKind.MULTIMEDIA: _schema(
        GranuleKind.MULTIMEDIA, "Multimedia",
        Url=_T, Kind=_T, Caption=_T,
    ),
    GranuleKind.CONTACTS: _schema(
        GranuleKind.CONTACTS, "Contacts",
        ContactName=_T, Phone=_T, Email=_T, Website=_T,
    ),
    GranuleKind.LEGAL_INFORMATION: _schema(
        GranuleKind.LEGAL_INFORMATION, "LegalInformation",
        LegalName=_T, Siret=_T, LegalStatus=_T,
    ),
    GranuleKind.CLASSIFICATIONS: _schema(
        GranuleKind.CLASSIFICATIONS, "Classifications",
        Scheme=_T, RatingValue=_D, Label=_T,
    ),
    GranuleKind.RELATED_SERVICES: _schema(
        GranuleKind.RELATED_SERVICES, "RelatedServices",
        Reference=FieldSpec(FieldType.REF), Relation=_T,
    ),
    GranuleKind.GEOLOCATIONS: _schema(
        GranuleKind.GEOLOCATIONS, "Geolocation",
        AddressLine1=_T, AddressLine2=_T, City=_T, PostalCode=_T, Country=_T,
        Latitude=FieldSpec(FieldType.DECIMAL, Decimal(-90), Decimal(90)),
        Longitude=FieldSpec(FieldType.DECIMAL, Decimal(-180), Decimal(180)),
        Position=FieldSpec(FieldType.GEOPOINT),
        Environment=_T,
    ),
    GranuleKind.PERIODS: _schema(
        GranuleKind.PERIODS, "Periods",
        Start=_DATE, End=_DATE, Kind=_T,
    ),
    GranuleKind.CUSTOMERS: _schema(
        GranuleKind.CUSTOMERS, "Customers",
        Audience=_T, Profile=_T,
    ),
    GranuleKind.LANGUAGES: _schema(
        GranuleKind.LANGUAGES, "Languages",
        Language=_T,
    ),
    GranuleKind.RESERVATION_MODES: _schema(
        GranuleKind.RESERVATION_MODES, "ReservationModes",
        Required=_T, Contact=_T,
    ),
    GranuleKind.PRICES: _schema(
        GranuleKind.PRICES, "Prices",
        Amount=_D, Currency=_T, PaymentMeans=_T, Service=_T,
    ),
    GranuleKind.CAPACITY: _schema(
        GranuleKind.CAPACITY, "Capacity",
        Value=_D, Unit=_T,
    ),
    GranuleKind.OFFERS_SERVICES: _schema(
        GranuleKind.OFFERS_SERVICES, "OffersServices",
        Service=_T, Nearby=_T,
    ),
    GranuleKind.ADDITIONAL_DESCRIPTION: _schema(
        GranuleKind.ADDITIONAL_DESCRIPTION, "AdditionalDescription",
        Text=_T,
    ),
    GranuleKind.ITINERARIES: _schema(
        GranuleKind.ITINERARIES, "Itineraries",
        Activity=_T, Length=_D,
    ),
    GranuleKind.SCHEDULES: _schema(
        GranuleKind.SCHEDULES, "Schedules",
        Status=_T, Detail=_T,
    ),
})

IDENTIFIER_PATH = GRANULE_SCHEMAS[GranuleKind.DUBLIN_CORE].path("Identifier")
LATITUDE_PATH = GRANULE_SCHEMAS[GranuleKind.GEOLOCATIONS].path("Latitude")
LONGITUDE_PATH = GRANULE_SCHEMAS[GranuleKind.GEOLOCATIONS].path("Longitude")


@dataclass
class Granule:
    """One granule instance: a kind plus normalized field/value pairs.

    Keys are canonical field paths (``Prices/Amount``) or, for fields
    preserved from unrecognized dialect tags, full extension IRIs.
    """

    kind: GranuleKind
    fields: dict[str, FieldValue] = field(default_factory=dict)


@dataclass
class InformationObject:
    """One tourism resource (hotel, event, restaurant) assembled from granules.

    ``extensions`` holds resource-level fields preserved from unrecognized
    dialect subtrees, keyed by extension IRI.
    """

    id: str
    granules: dict[GranuleKind, list[Granule]] = field(default_factory=dict)
    extensions: dict[str, str] = field(default_factory=dict)

    def first(self, kind: GranuleKind) -> Optional[Granule]:
        instances = self.granules.get(kind)
        return instances[0] if instances else None


@dataclass(frozen=True)
class ConceptDescriptor:
    """One class in the concept forest."""

    iri: str
    label: str
    parent: Optional[str]
    description: str = ""


def class_of(kind: GranuleKind) -> str:
    """Class IRI for a granule kind.  Total and injective."""
    return TIFSEM_NS + kind.value


# Schema.org subset: (name, parent name).  Thing roots the forest; the
# Hotel, Event, ReviewAction and Reservation chains are the ones queries
# and mappings rely on, the rest are alignment targets.
_SCHEMA_TREE: tuple[tuple[str, Optional[str]], ...] = (
    ("Thing", None),
    ("Place", "Thing"),
    ("LocalBusiness", "Place"),
    ("LodgingBusiness", "LocalBusiness"),
    ("Hostel", "LodgingBusiness"),
    ("Hotel", "LodgingBusiness"),
    ("Motel", "LodgingBusiness"),
    ("Event", "Thing"),
    ("MusicEvent", "Event"),
    ("SocialEvent", "Event"),
    ("SportsEvent", "Event"),
    ("Action", "Thing"),
    ("AssessAction", "Action"),
    ("ReviewAction", "AssessAction"),
    ("Intangible", "Thing"),
    ("Reservation", "Intangible"),
    ("EventReservation", "Reservation"),
    ("FoodEstablishmentReservation", "Reservation"),
    ("LodgingReservation", "Reservation"),
    ("CreativeWork", "Thing"),
    ("MediaObject", "CreativeWork"),
    ("Rating", "Intangible"),
    ("StructuredValue", "Intangible"),
    ("ContactPoint", "StructuredValue"),
    ("Organization", "Thing"),
    ("Language", "Intangible"),
    ("Offer", "Intangible"),
    ("PriceSpecification", "StructuredValue"),
)


@dataclass(frozen=True)
class OntologySnapshot:
    """Immutable view of the concept forest, the known properties, and the
    granule field schemas."""

    concepts: Mapping[str, ConceptDescriptor]
    properties: frozenset[str]
    granule_schemas: Mapping[GranuleKind, GranuleSchema]
    _paths: Mapping[str, tuple[GranuleKind, str]] = field(repr=False, default_factory=dict)
    _tags: Mapping[str, GranuleKind] = field(repr=False, default_factory=dict)

    def is_subclass(self, a: str, b: str) -> bool:
        """Reflexive-transitive subclass test over parent links."""
        if a not in self.concepts:
            raise UnknownTermError(f"unknown concept IRI: {a}")
        if b not in self.concepts:
            raise UnknownTermError(f"unknown concept IRI: {b}")
        node: Optional[str] = a
        while node is not None:
            if node == b:
                return True
            node = self.concepts[node].parent
        return False

    def tifsem_classes(self) -> frozenset[str]:
        return frozenset(i for i in self.concepts if i.startswith(TIFSEM_NS))

    def schema_classes(self) -> frozenset[str]:
        return frozenset(i for i in self.concepts if i.startswith(SCHEMA_NS))

    def kind_for_tag(self, tag: str) -> Optional[GranuleKind]:
        return self._tags.get(tag)

    def has_path(self, canonical_path: str) -> bool:
        return canonical_path in self._paths

    def field_spec(self, canonical_path: str) -> Optional[FieldSpec]:
        entry = self._paths.get(canonical_path)
        if entry is None:
            return None
        kind, name = entry
        return self.granule_schemas[kind].fields[name]

    def predicate_for(self, canonical_path: str) -> str:
        kind, name = self._paths[canonical_path]
        return self.granule_schemas[kind].predicate(name)

    def canonical_paths(self) -> frozenset[str]:
        return frozenset(self._paths)


@lru_cache(maxsize=1)
def load_core_ontology() -> OntologySnapshot:
    """Build the embedded ontology snapshot.

    The TIFSem side counts 19 concepts: the information-object root plus the
    18 granule classes, each a direct child of the root.  The Schema.org side
    carries the subset of the vocabulary this toolkit maps onto.
    """
    concepts: dict[str, ConceptDescriptor] = {
        IO_CLASS: ConceptDescriptor(
            iri=IO_CLASS,
            label="InformationObject",
            parent=None,
            description="A modular, reusable description of one tourism resource.",
        )
    }
    for kind in GranuleKind:
        iri = class_of(kind)
        concepts[iri] = ConceptDescriptor(
            iri=iri,
            label=kind.value,
            parent=IO_CLASS,
            description=GRANULE_DESCRIPTIONS[kind],
        )
    for name, parent in _SCHEMA_TREE:
        iri = SCHEMA_NS + name
        concepts[iri] = ConceptDescriptor(
            iri=iri,
            label=name,
            parent=None if parent is None else SCHEMA_NS + parent,
            description="",
        )

    properties = {HAS_GRANULE, SCHEMA_ADDRESS, SCHEMA_LATITUDE, SCHEMA_LONGITUDE}
    paths: dict[str, tuple[GranuleKind, str]] = {}
    tags: dict[str, GranuleKind] = {}
    for kind, schema in GRANULE_SCHEMAS.items():
        tags[schema.tag] = kind
        for name, spec in schema.fields.items():
            paths[schema.path(name)] = (kind, name)
            if spec.type is not FieldType.GEOPOINT:
                properties.add(schema.predicate(name))
    properties.add(LATITUDE_PROP)
    properties.add(LONGITUDE_PROP)

    return OntologySnapshot(
        concepts=MappingProxyType(concepts),
        properties=frozenset(properties),
        granule_schemas=GRANULE_SCHEMAS,
        _paths=MappingProxyType(paths),
        _tags=MappingProxyType(tags),
    )


def decimal_lexical(value: Decimal | float | int) -> str:
    """Plain-notation lexical form for a decimal literal (never scientific)."""
    d = value if isinstance(value, Decimal) else Decimal(repr(float(value)))
    text = format(d, "f")
    return text
