"""Temporal business-metadata repository.

Dates are ``YYYY-MM-DD`` strings or ``datetime.date`` values. Results come back
as plain dicts and lists in the same JSON shapes the HTTP API serves.
"""

import datetime as _dt
import json as _json

from . import _core
from ._core import (
    BadRequest,
    Conflict,
    Error,
    NdjsonError,
    NotFound,
    ParseError,
    ValidationError,
    parse_query,
)

__all__ = [
    "Repository",
    "Service",
    "Error",
    "NotFound",
    "Conflict",
    "BadRequest",
    "ValidationError",
    "ParseError",
    "NdjsonError",
    "parse_query",
]


def _date(value):
    if value is None:
        return None
    if isinstance(value, _dt.date):
        return value.isoformat()
    return str(value)


def _attrs(attrs):
    if attrs is None:
        return None
    out = {}
    for key, value in attrs.items():
        out[key] = {"date": value.isoformat()} if isinstance(value, _dt.date) else value
    return _json.dumps(out)


class Repository:
    """Concept store, warehouse and the links between them, as one value."""

    def __init__(self, _impl=None):
        self._r = _impl if _impl is not None else _core.Repository()

    @classmethod
    def demo(cls):
        return cls(_core.Repository.demo())

    @classmethod
    def from_ndjson(cls, text):
        return cls(_core.Repository.from_ndjson(text))

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as f:
            return cls.from_ndjson(f.read())

    def to_ndjson(self):
        return self._r.to_ndjson()

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_ndjson())

    def import_ndjson(self, text):
        self._r.import_ndjson(text)

    def seed_demo(self):
        self._r.seed_demo()

    def copy(self):
        return Repository(self._r.copy())

    def __eq__(self, other):
        return isinstance(other, Repository) and self._r == other._r

    def max_known_date(self):
        return self._r.max_known_date()

    # concepts
    def create_concept(self, kind, name, start, description="", attrs=None, id=None):
        return self._r.create_concept(kind, name, description, _attrs(attrs) or "", _date(start), id)

    def update_concept(self, id, effective_from, name=None, description=None, attrs=None):
        return self._r.update_concept(id, name, description, _attrs(attrs), _date(effective_from))

    def retire_concept(self, id, at):
        self._r.retire_concept(id, _date(at))

    def get_as_of(self, id, t):
        text = self._r.get_as_of(id, _date(t))
        return None if text is None else _json.loads(text)

    def history(self, id):
        return _json.loads(self._r.history(id))

    def ids_of_kind(self, kind):
        return _json.loads(self._r.ids_of_kind(kind))

    # associations
    def create_association(self, kind, src, dst, start, id=None):
        return self._r.create_association(kind, src, dst, _date(start), id)

    def end_association(self, id, at):
        self._r.end_association(id, _date(at))

    # navigation
    def navigate(self, id, method, t):
        return _json.loads(self._r.navigate(id, method, _date(t)))

    def navigate_during(self, id, method, start, end):
        return _json.loads(self._r.navigate_during(id, method, _date(start), _date(end)))

    def get_dimension(self, id, t):
        return _json.loads(self._r.get_dimension(id, _date(t)))

    def get_facts(self, id, t):
        return _json.loads(self._r.get_facts(id, _date(t)))

    def row_to_concepts(self, dimension, key, t):
        return _json.loads(self._r.row_to_concepts(dimension, key, _date(t)))

    def fact_to_measures(self, fact, t):
        return _json.loads(self._r.fact_to_measures(fact, _date(t)))

    def query_facts(self, query):
        """Run a fact query given in the JSON shape of POST /warehouse/query."""
        return _json.loads(self._r.query_facts(_json.dumps(query)))

    def record_evaluation(self, goal, text, at, measure=None, provenance=None):
        return _json.loads(self._r.record_evaluation(goal, measure, text, _date(at), provenance))

    def query(self, text, now=None):
        """Evaluate a NavQL query; ``now`` defaults to the latest date in the repository."""
        return _json.loads(self._r.query(text, _date(now)))


class Service:
    """In-process HTTP adapter: ``handle`` returns ``(status, decoded body)``."""

    def __init__(self, repository):
        self._s = _core.Service(repository._r)

    def handle(self, method, path, query=None, body=None):
        payload = "" if body is None else _json.dumps(body)
        status, text = self._s.handle(method, path, query or {}, payload)
        return status, (_json.loads(text) if text else None)

    def snapshot(self):
        return Repository(self._s.snapshot())
