"""Deterministic instance generation.

The random source is SplitMix64 (Steele, Lea & Flood 2014), chosen because it
is tiny and fully specified, so a stream can be reproduced in any language
from its published constants.  Instance ``i`` of a campaign with master seed
``s`` is generated from its own SplitMix64 stream seeded with the ``i``-th
output (0-based) of the master stream ``SplitMix64(s)``.

Bounded integers use rejection sampling on whole 64-bit outputs: draw ``x``
until ``x < 2**64 - (2**64 % n)`` and return ``x % n``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact_numeric import format_rational, parse_rational
from .inequalities import ExponentVector, NonNegMatrix, SortedMatrix
from .instances import Instance
from .menelaus import Line, Point, Polygon, transversal_points, GeometryError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]


def instance_seed(seed: int, index: int) -> int:
    """The ``index``-th output of ``SplitMix64(seed)``, by random access."""
    return mix64((seed + (index + 1) * GAMMA) & MASK64)


def instance_rng(seed: int, index: int) -> SplitMix64:
    return SplitMix64(instance_seed(seed, index))


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _tuples(m: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def walk(prefix: list[int], remaining: Fraction, left: int):
        if left == 1:
            if remaining.numerator == 1 and remaining.denominator >= max(prefix[-1:] + [2]):
                out.append(tuple(prefix + [remaining.denominator]))
            return
        # 1/p < remaining strictly, since later parts are still positive
        lo = max(prefix[-1] if prefix else 2, int(1 / remaining) + 1)
        hi = int(left / remaining)
        for p in range(lo, hi + 1):
            walk(prefix + [p], remaining - Fraction(1, p), left - 1)

    walk([], Fraction(1), m)
    return tuple(sorted(out))


def enumerate_integer_conjugate_tuples(m: int) -> list[tuple[int, ...]]:
    """All nondecreasing integer tuples with ``sum(1/p) == 1`` and every ``p >= 2``."""
    if m < 2:
        raise ValueError("need m >= 2")
    return list(_tuples(m))


def exponents_from_weights(weights: Sequence[int]) -> ExponentVector:
    """``p_k = G / g_k`` with ``G = sum(g)``; conjugate by construction."""
    if len(weights) < 2 or any(g <= 0 for g in weights):
        raise ValueError("need at least two positive weights")
    total = sum(weights)
    return ExponentVector(tuple(Fraction(total, g) for g in weights))


def gen_conjugate_exponents_rational(m: int, rng: SplitMix64, max_weight: int = 16) -> ExponentVector:
    if m < 2:
        raise ValueError("need m >= 2")
    return exponents_from_weights([rng.randint(1, max_weight) for _ in range(m)])


# ---------------------------------------------------------------------------
# Generation parameters
# ---------------------------------------------------------------------------

GEN_STATEMENTS = ("holder", "cbs", "minkowski", "chebyshev", "application", "menelaus")

_DEFAULT_N = {"menelaus": (3, 12)}
_DEFAULT_M = {"minkowski": (1, 5), "chebyshev": (1, 5), "cbs": (2, 4)}


@dataclass(frozen=True)
class GenSpec:
    """What to generate.  ``n_range``/``m_range`` are inclusive.

    For ``menelaus`` the polygon size is taken from ``n_range``.
    """

    statement: str
    n_range: tuple[int, int] | None = None
    m_range: tuple[int, int] | None = None
    num_bits: int = 16
    den_bits: int = 8
    exponent_mode: str = "integer"
    p_choices: tuple[Fraction, ...] = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))
    special_rate: int = 32
    mutation: str | None = None

    def __post_init__(self):
        if self.statement not in GEN_STATEMENTS:
            raise ValueError(f"unknown statement {self.statement!r}")
        n_range = tuple(self.n_range or _DEFAULT_N.get(self.statement, (1, 8)))
        m_range = tuple(self.m_range or _DEFAULT_M.get(self.statement, (2, 5)))
        object.__setattr__(self, "n_range", n_range)
        object.__setattr__(self, "m_range", m_range)
        object.__setattr__(self, "p_choices", tuple(parse_rational(p) for p in self.p_choices))
        for lo, hi in (n_range, m_range):
            if lo > hi or lo < 1:
                raise ValueError(f"bad range {lo}..{hi}")
        if self.statement == "menelaus" and n_range[0] < 3:
            raise ValueError("polygons need n >= 3")
        if self.statement in ("holder", "cbs") and m_range[0] < 2:
            raise ValueError(f"{self.statement} needs m >= 2")
        if self.num_bits < 1 or self.den_bits < 0:
            raise ValueError("magnitude bounds must be positive")
        if self.exponent_mode not in ("integer", "rational"):
            raise ValueError(f"unknown exponent mode {self.exponent_mode!r}")
        if any(p < 1 for p in self.p_choices) or not self.p_choices:
            raise ValueError("Minkowski exponents must be >= 1")

    def to_json(self) -> dict:
        out = asdict(self)
        out["n_range"] = list(self.n_range)
        out["m_range"] = list(self.m_range)
        out["p_choices"] = [format_rational(p) for p in self.p_choices]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GenSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown GenSpec fields: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("n_range", "m_range"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(kwargs[key])
        if "p_choices" in kwargs:
            kwargs["p_choices"] = tuple(parse_rational(p) for p in kwargs["p_choices"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "GenSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def gen_entry(rng: SplitMix64, spec: GenSpec) -> Fraction:
    if spec.special_rate and rng.below(spec.special_rate) == 0:
        return Fraction(rng.below(2))
    num = rng.below(1 << spec.num_bits)
    den = rng.randint(1, 1 << spec.den_bits)
    return Fraction(num, den)


def gen_matrix(n: int, m: int, rng: SplitMix64, spec: GenSpec) -> NonNegMatrix:
    return NonNegMatrix(tuple(tuple(gen_entry(rng, spec) for _ in range(m)) for _ in range(n)))


def gen_sorted_matrix(n: int, m: int, rng: SplitMix64, spec: GenSpec) -> SortedMatrix:
    columns = [sorted((gen_entry(rng, spec) for _ in range(n)), reverse=True) for _ in range(m)]
    return SortedMatrix(tuple(zip(*columns)))


class GenerationFailed(RuntimeError):
    pass


def gen_polygon_and_transversal(n: int, rng: SplitMix64, coord_bits: int = 6,
                                den_bits: int = 3, budget: int = 1000) -> tuple[Polygon, Line]:
    """Rejection-sample rational vertices and a rational line in general position."""
    if n < 3:
        raise ValueError("need n >= 3")
    span = 1 << coord_bits

    def coord() -> Fraction:
        return Fraction(rng.randint(-span, span), rng.randint(1, 1 << den_bits))

    for _ in range(budget):
        verts = [Point(coord(), coord()) for _ in range(n)]
        if any(verts[i] == verts[(i + 1) % n] for i in range(n)):
            continue
        a, b, c = rng.randint(-span, span), rng.randint(-span, span), coord()
        if a == 0 and b == 0:
            continue
        polygon, line = Polygon(tuple(verts)), Line(a, b, c)
        try:
            transversal_points(polygon, line)
        except GeometryError:
            continue
        return polygon, line
    raise GenerationFailed(f"no valid configuration in {budget} attempts")


# ---------------------------------------------------------------------------
# Whole instances
# ---------------------------------------------------------------------------

def generate(spec: GenSpec, rng: SplitMix64) -> Instance:
    n = rng.randint(*spec.n_range)
    m = rng.randint(*spec.m_range)
    kind = spec.statement
    if kind == "holder":
        if spec.exponent_mode == "integer":
            P = ExponentVector(rng.choice(enumerate_integer_conjugate_tuples(m)))
        else:
            P = gen_conjugate_exponents_rational(m, rng)
        return Instance(kind, (gen_matrix(n, m, rng, spec), P))
    if kind == "cbs":
        return Instance(kind, (gen_matrix(n, m, rng, spec),))
    if kind == "minkowski":
        return Instance(kind, (gen_matrix(n, m, rng, spec), rng.choice(spec.p_choices)))
    if kind == "chebyshev":
        return Instance(kind, (gen_sorted_matrix(n, m, rng, spec),))
    if kind == "application":
        pairs = tuple((gen_entry(rng, spec), gen_entry(rng, spec)) for _ in range(3))
        return Instance(kind, pairs)
    if kind == "menelaus":
        return Instance(kind, gen_polygon_and_transversal(n, rng))
    raise ValueError(kind)


def generate_indexed(spec: GenSpec, seed: int, index: int) -> Instance:
    return generate(spec, instance_rng(seed, index))


def stream(spec: GenSpec, seed: int, count: int):
    for i in range(count):
        yield generate_indexed(spec, seed, i)
