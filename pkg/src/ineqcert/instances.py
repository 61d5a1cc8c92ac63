"""Statement instances: one container, JSON round-tripping and checker dispatch.

JSON layout (all numbers are rational strings)::

    {"statement": "holder", "n": 2, "m": 3,
     "entries": [["1", "1", "1"], ["2", "1", "1"]], "exponents": ["2", "3", "6"]}
    {"statement": "minkowski", ..., "p": "3/2"}
    {"statement": "application", "a": ["1", "2"], "b": [...], "c": [...]}
    {"statement": "menelaus", "vertices": [["0", "0"], ...], "line": ["1", "-2", "-2"]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exact_numeric import format_rational, parse_rational
from .inequalities import (
    DEFAULT_CONFIG,
    CheckConfig,
    EQUALITY,
    ExponentVector,
    NonNegMatrix,
    Outcome,
    SortedMatrix,
    Verdict,
    check_application,
    check_cbs,
    check_chebyshev,
    check_holder,
    check_minkowski,
)
from .menelaus import Line, Polygon, menelaus_product

STATEMENTS = ("holder", "cbs", "minkowski", "chebyshev", "application", "menelaus")


@dataclass(frozen=True)
class Instance:
    """A statement name plus the positional arguments of its checker."""

    statement: str
    data: tuple = field(default=())

    @property
    def shape(self) -> tuple[int, int]:
        first = self.data[0]
        if isinstance(first, NonNegMatrix):
            return first.n, first.m
        if isinstance(first, Polygon):
            return first.n, 0
        return 2, 3

    def to_json(self) -> dict:
        return instance_to_json(self)

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        return instance_from_json(data)


def instance_to_json(inst: Instance) -> dict:
    kind = inst.statement
    out: dict = {"statement": kind}
    if kind == "menelaus":
        polygon, line = inst.data
        out["vertices"] = polygon.to_json()
        out["line"] = line.to_json()
        return out
    if kind == "application":
        for name, pair in zip("abc", inst.data):
            out[name] = [format_rational(x) for x in pair]
        return out
    M = inst.data[0]
    out.update(n=M.n, m=M.m, entries=M.to_json())
    if kind == "holder":
        out["exponents"] = inst.data[1].to_json()
    elif kind == "minkowski":
        out["p"] = format_rational(inst.data[1])
    return out


def instance_from_json(data: dict) -> Instance:
    kind = data.get("statement")
    if kind not in STATEMENTS:
        raise ValueError(f"unknown statement {kind!r}")
    if kind == "menelaus":
        return Instance(kind, (Polygon.from_json(data["vertices"]), Line.from_json(data["line"])))
    if kind == "application":
        return Instance(kind, tuple(tuple(parse_rational(x) for x in data[name]) for name in "abc"))
    entries = data["entries"]
    cls = SortedMatrix if kind == "chebyshev" else NonNegMatrix
    M = cls(tuple(tuple(parse_rational(x) for x in row) for row in entries))
    if "n" in data and data["n"] != M.n or "m" in data and data["m"] != M.m:
        raise ValueError("declared n/m disagree with entries")
    if kind == "holder":
        return Instance(kind, (M, ExponentVector(tuple(data["exponents"]))))
    if kind == "minkowski":
        return Instance(kind, (M, parse_rational(data["p"])))
    return Instance(kind, (M,))


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))


def check_menelaus(polygon: Polygon, line: Line, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    product = menelaus_product(polygon, line)
    if product == 1:
        return EQUALITY
    return Verdict(Outcome.VIOLATED, None,
                   {"relation": "==", "method": "exact", "product": format_rational(product)})


def check_instance(inst: Instance, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    kind = inst.statement
    if kind == "holder":
        return check_holder(*inst.data, cfg)
    if kind == "cbs":
        return check_cbs(*inst.data, cfg)
    if kind == "minkowski":
        return check_minkowski(*inst.data, cfg)
    if kind == "chebyshev":
        return check_chebyshev(*inst.data, cfg)
    if kind == "application":
        return check_application(*inst.data, cfg)
    if kind == "menelaus":
        return check_menelaus(*inst.data, cfg)
    raise ValueError(f"unknown statement {kind!r}")
