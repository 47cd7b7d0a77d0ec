"""SPARQL-subset query language: basic graph patterns, comparison filters,
a great-circle distance filter, ordering, projection, and a GROUP-COUNT
aggregate for proximity ranking.

Surface grammar::

    PREFIX pfx: <iri> ...
    SELECT ?a ?b | (GROUP-COUNT(?x) AS ?n)
    WHERE { <triple patterns> FILTER(...) ... }
    ORDER BY [ASC|DESC](?v)    (optional)
    LIMIT n                    (optional)

``geo:distance(?a, ?b) < N`` filters on the haversine distance in meters
between the coordinates attached to the two bound nodes.  Evaluation is
read-only over the graph and deterministic: without ORDER BY, solutions are
sorted by the serialized forms of the projected terms.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Iterable, Optional, Sequence, Union

from tifsem.errors import QuerySyntaxError, QueryTypeError
from tifsem.graph import (
    RDF_TYPE,
    XSD_NS,
    BlankNode,
    Graph,
    IRI,
    Literal,
    Term,
    XSD_STRING,
)
from tifsem.ontology import (
    GeoPoint,
    LATITUDE_PROP,
    LONGITUDE_PROP,
    SCHEMA_LATITUDE,
    SCHEMA_LONGITUDE,
)
from tifsem.serialize import term_to_ntriples

EARTH_RADIUS_M = 6_371_000.0

_NUMERIC_DATATYPES = frozenset(
    XSD_NS + name for name in ("integer", "decimal", "double", "float", "long", "int")
)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


PatternTerm = Union[Var, IRI, Literal]
Operand = Union[Var, IRI, Literal]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.predicate, self.object) if isinstance(t, Var)}


@dataclass(frozen=True)
class Compare:
    left: Operand
    op: str  # one of < <= = != >= >
    right: Operand


@dataclass(frozen=True)
class DistanceWithin:
    point_a: Operand
    point_b: Operand
    threshold: float  # meters, strict upper bound

    def __post_init__(self) -> None:
        if not (math.isfinite(self.threshold) and self.threshold > 0):
            raise ValueError("distance threshold must be finite and positive")


@dataclass(frozen=True)
class And:
    items: tuple

@dataclass(frozen=True)
class Or:
    items: tuple

@dataclass(frozen=True)
class Not:
    inner: object


FilterExpr = Union[Compare, DistanceWithin, And, Or, Not]


@dataclass(frozen=True)
class GroupCount:
    var: Var
    alias: Var


@dataclass(frozen=True)
class OrderSpec:
    key: Var
    ascending: bool = True


@dataclass
class Query:
    projection: list[Var]
    patterns: list[TriplePattern]
    filters: list[FilterExpr]
    group_count: Optional[GroupCount] = None
    order_by: Optional[OrderSpec] = None
    limit: Optional[int] = None

    @property
    def output_variables(self) -> list[str]:
        names = [v.name for v in self.projection]
        if self.group_count is not None:
            names.append(self.group_count.alias.name)
        return names

    def to_dict(self) -> dict:
        """Plain-data form of the AST, used for golden-file comparisons."""
        def term(t):
            if isinstance(t, Var):
                return {"var": t.name}
            if isinstance(t, IRI):
                return {"iri": t.value}
            out = {"literal": t.lexical, "datatype": t.datatype}
            if t.language is not None:
                out["language"] = t.language
            return out

        def filt(f):
            if isinstance(f, Compare):
                return {"compare": {"left": term(f.left), "op": f.op, "right": term(f.right)}}
            if isinstance(f, DistanceWithin):
                return {"distance_within": {
                    "a": term(f.point_a), "b": term(f.point_b), "threshold": f.threshold}}
            if isinstance(f, And):
                return {"and": [filt(i) for i in f.items]}
            if isinstance(f, Or):
                return {"or": [filt(i) for i in f.items]}
            return {"not": filt(f.inner)}

        out: dict = {
            "projection": [v.name for v in self.projection],
            "patterns": [
                {"subject": term(p.subject), "predicate": term(p.predicate), "object": term(p.object)}
                for p in self.patterns
            ],
            "filters": [filt(f) for f in self.filters],
        }
        if self.group_count is not None:
            out["group_count"] = {"var": self.group_count.var.name, "alias": self.group_count.alias.name}
        if self.order_by is not None:
            out["order_by"] = {"key": self.order_by.key.name, "ascending": self.order_by.ascending}
        if self.limit is not None:
            out["limit"] = self.limit
        return out


@dataclass
class SolutionTable:
    variables: list[str]
    rows: list[tuple[Term, ...]]

    def as_dicts(self) -> list[dict[str, Term]]:
        return [dict(zip(self.variables, row)) for row in self.rows]


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+|\#[^\n]*)
    | (?P<IRIREF><[^<>"{}|^`\\\x00-\x20]*>)
    | (?P<VAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<STRING>"(?:[^"\\\n]|\\.)*")
    | (?P<NUMBER>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
    | (?P<PNAME>[A-Za-z][A-Za-z0-9_-]*:[A-Za-z0-9_.-]*)
    | (?P<NAME>[A-Za-z][A-Za-z0-9_-]*)
    | (?P<LANGTAG>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
    | (?P<OP>\^\^|&&|\|\||<=|>=|!=|[{}().,=<>!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "WS":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


_STRING_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unquote(raw: str, pos: int) -> str:
    body = raw[1:-1]

    def repl(m: re.Match) -> str:
        esc = m.group(1)
        if esc[0] == "u":
            return chr(int(esc[1:5], 16))
        if esc[0] == "U":
            return chr(int(esc[1:9], 16))
        if esc in _STRING_ESCAPES:
            return _STRING_ESCAPES[esc]
        raise QuerySyntaxError(f"invalid string escape \\{esc}", pos)

    return re.sub(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", repl, body)


# ---------------------------------------------------------------------------
# Parser

_KEYWORDS = {"select", "where", "prefix", "filter", "order", "by", "asc", "desc", "limit", "as"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.prefixes: dict[str, str] = {}

    # token helpers ------------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.index]

    def next(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None) -> QuerySyntaxError:
        tok = tok or self.peek()
        return QuerySyntaxError(message, tok.pos)

    def expect_op(self, text: str) -> _Token:
        tok = self.next()
        if tok.kind != "OP" or tok.text != text:
            raise self.fail(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text.lower() == word:
            self.next()
            return True
        return False

    def expect_keyword(self, word: str) -> None:
        tok = self.next()
        if tok.kind != "NAME" or tok.text.lower() != word:
            raise self.fail(f"expected {word.upper()}", tok)

    # grammar ------------------------------------------------------------
    def parse(self) -> Query:
        while self.keyword("prefix"):
            name = self.next()
            if name.kind != "PNAME" or not name.text.endswith(":"):
                raise self.fail("expected prefix name ending in ':'", name)
            iri = self.next()
            if iri.kind != "IRIREF":
                raise self.fail("expected namespace IRI", iri)
            self.prefixes[name.text[:-1]] = iri.text[1:-1]

        self.expect_keyword("select")
        projection, group_count = self.parse_projection()
        self.expect_keyword("where")
        self.expect_op("{")
        patterns, filters = self.parse_group()
        order_by = self.parse_order()
        limit = self.parse_limit()
        tok = self.peek()
        if tok.kind != "EOF":
            raise self.fail(f"unexpected trailing {tok.text!r}", tok)

        query = Query(
            projection=projection,
            patterns=patterns,
            filters=filters,
            group_count=group_count,
            order_by=order_by,
            limit=limit,
        )
        self.validate(query)
        return query

    def parse_projection(self) -> tuple[list[Var], Optional[GroupCount]]:
        projection: list[Var] = []
        group_count: Optional[GroupCount] = None
        while True:
            tok = self.peek()
            if tok.kind == "VAR":
                projection.append(Var(self.next().text[1:]))
                continue
            if tok.kind == "OP" and tok.text == "(":
                if group_count is not None:
                    raise self.fail("only one GROUP-COUNT aggregate is supported", tok)
                self.next()
                name = self.next()
                if name.kind != "NAME" or name.text.upper() != "GROUP-COUNT":
                    raise self.fail("expected GROUP-COUNT", name)
                self.expect_op("(")
                var_tok = self.next()
                if var_tok.kind != "VAR":
                    raise self.fail("expected variable", var_tok)
                self.expect_op(")")
                self.expect_keyword("as")
                alias_tok = self.next()
                if alias_tok.kind != "VAR":
                    raise self.fail("expected alias variable", alias_tok)
                self.expect_op(")")
                group_count = GroupCount(Var(var_tok.text[1:]), Var(alias_tok.text[1:]))
                continue
            break
        if not projection and group_count is None:
            raise self.fail("projection must name at least one variable")
        return projection, group_count

    def parse_group(self) -> tuple[list[TriplePattern], list[FilterExpr]]:
        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text == "}":
                self.next()
                return patterns, filters
            if tok.kind == "EOF":
                raise self.fail("unterminated group: expected '}'", tok)
            if tok.kind == "NAME" and tok.text.lower() == "filter":
                self.next()
                self.expect_op("(")
                filters.append(self.parse_or())
                self.expect_op(")")
                continue
            subject = self.parse_term(position="subject")
            predicate = self.parse_term(position="predicate")
            obj = self.parse_term(position="object")
            patterns.append(TriplePattern(subject, predicate, obj))
            if self.peek().kind == "OP" and self.peek().text == ".":
                self.next()

    def parse_term(self, position: str) -> PatternTerm:
        tok = self.next()
        if tok.kind == "VAR":
            return Var(tok.text[1:])
        if tok.kind == "IRIREF":
            return IRI(tok.text[1:-1])
        if tok.kind == "PNAME":
            return IRI(self.expand_pname(tok))
        if tok.kind == "NAME" and tok.text == "a" and position == "predicate":
            return IRI(RDF_TYPE)
        if tok.kind == "NUMBER":
            if position != "object":
                raise self.fail(f"number not allowed in {position} position", tok)
            return _number_literal(tok.text)
        if tok.kind == "STRING":
            if position != "object":
                raise self.fail(f"literal not allowed in {position} position", tok)
            return self.finish_literal(tok)
        raise self.fail(f"expected term, found {tok.text!r}", tok)

    def finish_literal(self, tok: _Token) -> Literal:
        lexical = _unquote(tok.text, tok.pos)
        nxt = self.peek()
        if nxt.kind == "LANGTAG":
            self.next()
            return Literal(lexical, language=nxt.text[1:])
        if nxt.kind == "OP" and nxt.text == "^^":
            self.next()
            dt = self.next()
            if dt.kind == "IRIREF":
                return Literal(lexical, dt.text[1:-1])
            if dt.kind == "PNAME":
                return Literal(lexical, self.expand_pname(dt))
            raise self.fail("expected datatype IRI", dt)
        return Literal(lexical)

    def expand_pname(self, tok: _Token) -> str:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise self.fail(f"unknown prefix {prefix!r}", tok)
        return self.prefixes[prefix] + local

    # filter expressions --------------------------------------------------
    def parse_or(self) -> FilterExpr:
        items = [self.parse_and()]
        while self.peek().kind == "OP" and self.peek().text == "||":
            self.next()
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_and(self) -> FilterExpr:
        items = [self.parse_unary()]
        while self.peek().kind == "OP" and self.peek().text == "&&":
            self.next()
            items.append(self.parse_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_unary(self) -> FilterExpr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "!":
            self.next()
            return Not(self.parse_unary())
        if tok.kind == "OP" and tok.text == "(":
            self.next()
            inner = self.parse_or()
            self.expect_op(")")
            return inner
        if tok.kind == "PNAME" and tok.text == "geo:distance":
            return self.parse_distance()
        return self.parse_compare()

    def parse_distance(self) -> DistanceWithin:
        self.next()  # geo:distance
        self.expect_op("(")
        a = self.parse_operand()
        self.expect_op(",")
        b = self.parse_operand()
        self.expect_op(")")
        op = self.next()
        if op.kind != "OP" or op.text != "<":
            raise self.fail("geo:distance supports only a strict '<' threshold", op)
        num = self.next()
        if num.kind != "NUMBER":
            raise self.fail("expected numeric threshold", num)
        try:
            return DistanceWithin(a, b, float(num.text))
        except ValueError as exc:
            raise self.fail(str(exc), num)

    def parse_compare(self) -> Compare:
        left = self.parse_operand()
        op = self.next()
        if op.kind != "OP" or op.text not in ("<", "<=", "=", "!=", ">=", ">"):
            raise self.fail("expected comparison operator", op)
        right = self.parse_operand()
        return Compare(left, op.text, right)

    def parse_operand(self) -> Operand:
        tok = self.next()
        if tok.kind == "VAR":
            return Var(tok.text[1:])
        if tok.kind == "NUMBER":
            return _number_literal(tok.text)
        if tok.kind == "STRING":
            return self.finish_literal(tok)
        if tok.kind == "IRIREF":
            return IRI(tok.text[1:-1])
        if tok.kind == "PNAME":
            return IRI(self.expand_pname(tok))
        raise self.fail(f"expected operand, found {tok.text!r}", tok)

    # modifiers ------------------------------------------------------------
    def parse_order(self) -> Optional[OrderSpec]:
        if not self.keyword("order"):
            return None
        self.expect_keyword("by")
        ascending = True
        tok = self.peek()
        if tok.kind == "NAME" and tok.text.lower() in ("asc", "desc"):
            ascending = self.next().text.lower() == "asc"
            self.expect_op("(")
            var_tok = self.next()
            if var_tok.kind != "VAR":
                raise self.fail("expected variable", var_tok)
            self.expect_op(")")
            return OrderSpec(Var(var_tok.text[1:]), ascending)
        if tok.kind == "VAR":
            return OrderSpec(Var(self.next().text[1:]), ascending)
        raise self.fail("expected ORDER BY key", tok)

    def parse_limit(self) -> Optional[int]:
        if not self.keyword("limit"):
            return None
        tok = self.next()
        if tok.kind != "NUMBER" or not re.fullmatch(r"\d+", tok.text):
            raise self.fail("LIMIT expects a non-negative integer", tok)
        return int(tok.text)

    # validation -----------------------------------------------------------
    def validate(self, query: Query) -> None:
        pattern_vars: set[str] = set()
        for p in query.patterns:
            pattern_vars |= p.variables()

        for v in query.projection:
            if v.name not in pattern_vars:
                raise QuerySyntaxError(f"projected variable ?{v.name} is unbound", 0)
        bound_outputs = set(pattern_vars)
        if query.group_count is not None:
            if query.group_count.var.name not in pattern_vars:
                raise QuerySyntaxError(
                    f"aggregated variable ?{query.group_count.var.name} is unbound", 0)
            if query.group_count.alias.name in pattern_vars:
                raise QuerySyntaxError(
                    f"alias ?{query.group_count.alias.name} shadows a pattern variable", 0)
            bound_outputs.add(query.group_count.alias.name)
        if query.order_by is not None and query.order_by.key.name not in bound_outputs:
            raise QuerySyntaxError(f"ordering variable ?{query.order_by.key.name} is unbound", 0)

        def filter_vars(expr) -> set[str]:
            if isinstance(expr, Compare):
                return {t.name for t in (expr.left, expr.right) if isinstance(t, Var)}
            if isinstance(expr, DistanceWithin):
                return {t.name for t in (expr.point_a, expr.point_b) if isinstance(t, Var)}
            if isinstance(expr, (And, Or)):
                return set().union(*(filter_vars(i) for i in expr.items))
            if isinstance(expr, Not):
                return filter_vars(expr.inner)
            return set()

        for f in query.filters:
            loose = filter_vars(f) - pattern_vars
            if loose:
                name = sorted(loose)[0]
                raise QuerySyntaxError(f"filter variable ?{name} is unbound", 0)


def parse_query(text: str) -> Query:
    """Parse query text; raises :class:`QuerySyntaxError` with the offset of
    the offending token."""
    return _Parser(text).parse()


def _number_literal(text: str) -> Literal:
    if re.fullmatch(r"[+-]?\d+", text):
        return Literal(text, XSD_NS + "integer")
    if "e" in text or "E" in text:
        return Literal(text, XSD_NS + "double")
    return Literal(text, XSD_NS + "decimal")


# ---------------------------------------------------------------------------
# Evaluation


def geo_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters (haversine, sphere of 6,371,000 m).

    Arguments are ordered canonically first, which makes symmetry exact at
    the float level.
    """
    if (b.latitude, b.longitude) < (a.latitude, a.longitude):
        a, b = b, a
    lat1, lat2 = math.radians(a.latitude), math.radians(b.latitude)
    dlat = math.radians(b.latitude - a.latitude)
    dlon = math.radians(b.longitude - a.longitude)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return EARTH_RADIUS_M * 2 * math.asin(min(1.0, math.sqrt(h)))


def filter_within(distance_m: float, threshold_m: float) -> bool:
    """Strict comparison: a distance exactly at the threshold is excluded."""
    return distance_m < threshold_m


def _numeric(term: Term) -> Optional[Decimal]:
    if isinstance(term, Literal) and term.datatype in _NUMERIC_DATATYPES:
        try:
            return Decimal(term.lexical)
        except InvalidOperation:
            return None
    return None


def _compare_terms(left: Term, op: str, right: Term) -> bool:
    ln, rn = _numeric(left), _numeric(right)
    if ln is not None and rn is not None:
        return _apply_op(ln, op, rn)
    if op in ("=", "!="):
        equal = left == right
        return equal if op == "=" else not equal
    if (
        isinstance(left, Literal)
        and isinstance(right, Literal)
        and left.language is None
        and right.language is None
        and left.datatype == right.datatype
        and left.datatype in (XSD_STRING, XSD_NS + "date")
    ):
        return _apply_op(left.lexical, op, right.lexical)
    raise QueryTypeError(
        f"cannot order {term_to_ntriples(left)} against {term_to_ntriples(right)}"
    )


def _apply_op(left, op: str, right) -> bool:
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == ">=":
        return left >= right
    return left > right


def resolve_point(term: Term, g: Graph) -> Optional[GeoPoint]:
    """Coordinates of a node, read from its latitude/longitude statements."""
    if not isinstance(term, (IRI, BlankNode)):
        return None
    for lat_prop, lon_prop in ((LATITUDE_PROP, LONGITUDE_PROP), (SCHEMA_LATITUDE, SCHEMA_LONGITUDE)):
        lat = _coordinate(term, lat_prop, g)
        lon = _coordinate(term, lon_prop, g)
        if lat is not None and lon is not None:
            try:
                return GeoPoint(float(lat), float(lon))
            except ValueError:
                return None
    return None


def _coordinate(subject, prop: str, g: Graph) -> Optional[Decimal]:
    values = []
    for t in g.match(subject=subject, predicate=IRI(prop)):
        value = _numeric(t.object) if isinstance(t.object, Literal) else None
        if value is None and isinstance(t.object, Literal):
            try:
                value = Decimal(t.object.lexical)
            except InvalidOperation:
                value = None
        if value is not None:
            values.append(value)
    return min(values) if values else None


def _eval_filter(expr: FilterExpr, row: dict[str, Term], g: Graph) -> bool:
    if isinstance(expr, And):
        return all(_eval_filter(i, row, g) for i in expr.items)
    if isinstance(expr, Or):
        return any(_eval_filter(i, row, g) for i in expr.items)
    if isinstance(expr, Not):
        return not _eval_filter(expr.inner, row, g)
    if isinstance(expr, Compare):
        return _compare_terms(_operand(expr.left, row), expr.op, _operand(expr.right, row))
    if isinstance(expr, DistanceWithin):
        pa = resolve_point(_operand(expr.point_a, row), g)
        pb = resolve_point(_operand(expr.point_b, row), g)
        if pa is None or pb is None:
            return False
        return filter_within(geo_distance(pa, pb), expr.threshold)
    raise TypeError(f"not a filter expression: {expr!r}")


def _operand(term: Operand, row: dict[str, Term]) -> Term:
    return row[term.name] if isinstance(term, Var) else term


def _solve_patterns(patterns: Sequence[TriplePattern], g: Graph) -> list[dict[str, Term]]:
    bindings: list[dict[str, Term]] = [{}]
    for pattern in patterns:
        extended: list[dict[str, Term]] = []
        for binding in bindings:
            fixed = []
            for term in (pattern.subject, pattern.predicate, pattern.object):
                if isinstance(term, Var):
                    fixed.append(binding.get(term.name))
                else:
                    fixed.append(term)
            s, p, o = fixed
            if s is not None and isinstance(s, Literal):
                continue  # a literal can never be a subject
            if p is not None and not isinstance(p, IRI):
                continue
            for triple in g.match(s, p, o):
                new = dict(binding)
                ok = True
                for term, value in (
                    (pattern.subject, triple.subject),
                    (pattern.predicate, triple.predicate),
                    (pattern.object, triple.object),
                ):
                    if isinstance(term, Var):
                        bound = new.get(term.name)
                        if bound is None:
                            new[term.name] = value
                        elif bound != value:
                            ok = False
                            break
                if ok:
                    extended.append(new)
        bindings = extended
        if not bindings:
            break
    return bindings


def _sort_rows(
    rows: list[tuple[Term, ...]],
    variables: Sequence[str],
    order_by: Optional[OrderSpec],
) -> list[tuple[Term, ...]]:
    def row_key(row: tuple[Term, ...]) -> tuple[str, ...]:
        return tuple(term_to_ntriples(t) for t in row)

    rows = sorted(rows, key=row_key)
    if order_by is None:
        return rows
    index = list(variables).index(order_by.key.name)

    def primary(row: tuple[Term, ...]):
        value = _numeric(row[index])
        if value is not None:
            return (0, value)
        return (1, term_to_ntriples(row[index]))

    # stable second pass keeps the serialized-form order inside ties
    rows.sort(key=primary, reverse=not order_by.ascending)
    return rows


def evaluate(q: Query, g: Graph) -> SolutionTable:
    """Evaluate a query: join semantics over the patterns, then filters,
    then the optional GROUP-COUNT aggregate, ordering, limit, projection.

    Projection is set-based: duplicate projected rows collapse.  The result
    order is always deterministic.
    """
    solutions = _solve_patterns(q.patterns, g)
    solutions = [s for s in solutions if all(_eval_filter(f, s, g) for f in q.filters)]

    variables = q.output_variables
    if q.group_count is not None:
        groups: dict[tuple[Term, ...], set[Term]] = {}
        for s in solutions:
            key = tuple(s[v.name] for v in q.projection)
            groups.setdefault(key, set()).add(s[q.group_count.var.name])
        rows = [
            key + (Literal(str(len(members)), XSD_NS + "integer"),)
            for key, members in groups.items()
        ]
    else:
        rows = list({tuple(s[v.name] for v in q.projection) for s in solutions})

    rows = _sort_rows(rows, variables, q.order_by)
    if q.limit is not None:
        rows = rows[: q.limit]
    return SolutionTable(variables=variables, rows=rows)


# ---------------------------------------------------------------------------
# Result formatting


def to_csv(table: SolutionTable) -> str:
    """CSV with variable-name header; terms in N-Triples term syntax."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.variables)
    for row in table.rows:
        writer.writerow([term_to_ntriples(t) for t in row])
    return buffer.getvalue()


def to_text_table(table: SolutionTable) -> str:
    cells = [[term_to_ntriples(t) for t in row] for row in table.rows]
    widths = [
        max([len(v)] + [len(row[i]) for row in cells])
        for i, v in enumerate(table.variables)
    ]
    def line(values: Iterable[str]) -> str:
        return "  ".join(v.ljust(w) for v, w in zip(values, widths)).rstrip()

    out = [line(table.variables), line("-" * w for w in widths)]
    out.extend(line(row) for row in cells)
    return "\n".join(out) + "\n"
