"""Counterexample search with greedy shrinking, and tightness search.

A *candidate* is either a valid :class:`Instance` or a :class:`Mutant`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .exact_numeric import RigorInterval, format_rational
from .generate import GenSpec, generate, instance_rng
from .inequalities import (
    DEFAULT_CONFIG,
    CheckConfig,
    InvalidInstance,
    NonNegMatrix,
    Outcome,
    SortedMatrix,
    Verdict,
    slack_ratio,
)
from .instances import Instance, check_instance, instance_to_json
from .menelaus import GeometryError, Polygon, transversal_points
from .mutate import Mutant, check_mutant, mutant_valid, mutate_to_false

Candidate = Instance | Mutant
Checker = Callable[[Candidate], Verdict]


def default_checker(cfg: CheckConfig = DEFAULT_CONFIG) -> Checker:
    def check(c: Candidate) -> Verdict:
        return check_mutant(c, cfg) if isinstance(c, Mutant) else check_instance(c, cfg)
    return check


def candidate_to_json(c: Candidate) -> dict:
    return c.to_json() if isinstance(c, Mutant) else instance_to_json(c)


# ---------------------------------------------------------------------------
# Shrinking
# ---------------------------------------------------------------------------

def _bits(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length() + 1


def _instance_size(inst: Instance) -> int:
    data = inst.data
    if inst.statement == "menelaus":
        polygon, line = data
        return sum(_bits(v.x) + _bits(v.y) for v in polygon.vertices)
    if inst.statement == "application":
        return sum(_bits(x) for pair in data for x in pair)
    return sum(_bits(x) for row in data[0].entries for x in row)


def size(c: Candidate) -> int:
    """Strictly decreases along every accepted shrink step."""
    if isinstance(c, Mutant):
        extra = _bits(c.detail[1]) if c.kind == "transversal_point" else 0
        return _instance_size(c.instance) + extra
    return _instance_size(c)


def _simpler(x: Fraction) -> list[Fraction]:
    options = [Fraction(0), Fraction(1), Fraction(math.floor(x)), Fraction(math.ceil(x)),
               x.limit_denominator(max(1, x.denominator // 2))]
    out = []
    for v in options:
        if v >= 0 and _bits(v) < _bits(x) and v not in out:
            out.append(v)
    return out


_MIN_COLUMNS = {"cbs": 2, "minkowski": 1, "chebyshev": 1}


def _matrix_moves(M: NonNegMatrix, statement: str, locked_column: int | None):
    """Yield ``(rows, dropped_column)``; ``dropped_column`` is None for row or entry moves."""
    rows = [list(r) for r in M.entries]
    n, m = M.n, M.m
    for i in range(n):
        if n > 1:
            yield rows[:i] + rows[i + 1:], None
    if statement in _MIN_COLUMNS:
        for k in range(m):
            if m > _MIN_COLUMNS[statement] and k != locked_column:
                yield [r[:k] + r[k + 1:] for r in rows], k
    # both sides are homogeneous in each column (Minkowski only in all columns
    # at once), so dividing by an entry keeps the verdict while shrinking
    groups = [list(range(m))] if statement == "minkowski" else [[k] for k in range(m)]
    for group in groups:
        for e in sorted({rows[i][k] for i in range(n) for k in group} - {0}):
            if e != 1:
                yield [[x / e if k in group else x for k, x in enumerate(r)] for r in rows], None
        yield [[Fraction(round(x)) if k in group else x for k, x in enumerate(r)] for r in rows], None
    for i in range(n):
        for k in range(m):
            for v in _simpler(rows[i][k]):
                new = [list(r) for r in rows]
                new[i][k] = v
                yield new, None


def _instance_moves(inst: Instance, locked_column: int | None = None,
                    side: int | None = None) -> Iterator[tuple[Instance, object]]:
    """Smaller instances, each with the matching adjustment of the mutation detail."""
    kind, data = inst.statement, inst.data
    if kind == "application":
        flat = [x for pair in data for x in pair]
        for j, x in enumerate(flat):
            for v in _simpler(x):
                new = flat[:j] + [v] + flat[j + 1:]
                yield Instance(kind, tuple(zip(new[0::2], new[1::2]))), None
        return
    if kind == "menelaus":
        polygon, line = data
        n = polygon.n
        for j in range(n):
            if n <= 3 or (side is not None and j in (side, (side + 1) % n)):
                continue
            verts = polygon.vertices[:j] + polygon.vertices[j + 1:]
            try:
                smaller = Polygon(verts)
            except GeometryError:
                continue
            new_side = None if side is None else (side - 1 if j < side else side)
            yield Instance(kind, (smaller, line)), new_side
        return
    M, rest = data[0], data[1:]
    cls = type(M)
    for rows, dropped in _matrix_moves(M, kind, locked_column):
        try:
            new_m = cls(tuple(tuple(r) for r in rows))
        except InvalidInstance:
            continue
        yield Instance(kind, (new_m,) + rest), dropped


def shrink_moves(c: Candidate) -> Iterator[Candidate]:
    if not isinstance(c, Mutant):
        for inst, _ in _instance_moves(c):
            yield inst
        return
    if c.kind == "sort_order":
        (k,) = c.detail
        for inst, dropped in _instance_moves(c.instance, locked_column=k):
            new_k = k if dropped is None or dropped > k else k - 1
            yield Mutant(c.kind, inst, (new_k,))
    elif c.kind == "transversal_point":
        side, offset = c.detail
        for v in _simpler(abs(offset)):
            for o in (v, -v):
                if o != 0:
                    yield Mutant(c.kind, c.instance, (side, o))
        for inst, new_side in _instance_moves(c.instance, side=side):
            yield Mutant(c.kind, inst, (new_side, offset))
    else:
        for inst, _ in _instance_moves(c.instance):
            yield Mutant(c.kind, inst, c.detail)


def candidate_valid(c: Candidate) -> bool:
    if isinstance(c, Mutant):
        return mutant_valid(c)
    if c.statement == "menelaus":
        try:
            transversal_points(*c.data)
        except GeometryError:
            return False
    return True


def shrink(c: Candidate, checker: Checker, max_checks: int = 2000) -> list[tuple[Candidate, Verdict]]:
    """Greedy shrink; every element of the returned path is re-checked Violated.

    The path starts with ``c`` itself (assumed Violated) and each later
    element is strictly smaller by :func:`size`.
    """
    path = [(c, checker(c))]
    checks = 0
    current = c
    progress = True
    while progress and checks < max_checks:
        progress = False
        current_size = size(current)
        for cand in shrink_moves(current):
            if size(cand) >= current_size or not candidate_valid(cand):
                continue
            try:
                verdict = checker(cand)
            except (InvalidInstance, GeometryError, ZeroDivisionError):
                continue
            checks += 1
            if verdict.outcome is Outcome.VIOLATED:
                path.append((cand, verdict))
                current = cand
                progress = True
                break
            if checks >= max_checks:
                break
    return path


# ---------------------------------------------------------------------------
# Counterexample search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    index: int
    trials: int
    witness: Candidate
    verdict: Verdict
    path: tuple[tuple[Candidate, Verdict], ...]

    @property
    def original(self) -> Candidate:
        return self.path[0][0]

    def to_json(self) -> dict:
        return {"index": self.index, "trials": self.trials,
                "witness": candidate_to_json(self.witness),
                "verdict": self.verdict.to_json(),
                "original": candidate_to_json(self.original),
                "shrink_steps": len(self.path) - 1}


def candidate_at(gen: GenSpec, seed: int, index: int) -> Candidate:
    rng = instance_rng(seed, index)
    inst = generate(gen, rng)
    return mutate_to_false(gen.mutation, inst, rng) if gen.mutation else inst


def counterexample_search(checker: Checker | None, gen: GenSpec, budget: int, seed: int,
                          do_shrink: bool = True) -> SearchResult | None:
    """First Violated candidate among ``budget`` draws, greedily shrunk.

    ``None`` means nothing was found, which is the expected outcome for a
    valid generator.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    checker = checker or default_checker()
    for i in range(budget):
        cand = candidate_at(gen, seed, i)
        verdict = checker(cand)
        if verdict.outcome is Outcome.VIOLATED:
            path = shrink(cand, checker) if do_shrink else [(cand, verdict)]
            witness, final = path[-1]
            return SearchResult(i, i + 1, witness, final, tuple(path))
    return None


# ---------------------------------------------------------------------------
# Tightness search
# ---------------------------------------------------------------------------

TIGHT_STATEMENTS = ("holder", "cbs", "minkowski", "chebyshev", "application")


@dataclass(frozen=True)
class TightnessResult:
    instance: Instance
    slack: Fraction | RigorInterval
    evaluations: int
    restarts: int

    @property
    def slack_estimate(self) -> float:
        s = self.slack
        return float(s) if isinstance(s, Fraction) else float(s.midpoint())

    def to_json(self) -> dict:
        s = self.slack
        slack = (format_rational(s) if isinstance(s, Fraction)
                 else [format_rational(s.lo_q), format_rational(s.hi_q)])
        return {"instance": instance_to_json(self.instance), "slack": slack,
                "slack_estimate": repr(self.slack_estimate),
                "evaluations": self.evaluations, "restarts": self.restarts}


def _score(inst: Instance) -> float:
    try:
        s = slack_ratio(inst.statement, inst.data, prec=64)
    except ZeroDivisionError:
        return -math.inf
    return float(s) if isinstance(s, Fraction) else float(s.midpoint())


def _nudge(x: Fraction, rng) -> Fraction:
    k = rng.below(12)
    factor = Fraction((1 << k) + 1, 1 << k)
    if rng.below(2):
        factor = 1 / factor
    if x == 0:
        return Fraction(1, 1 << k)
    return (x * factor).limit_denominator(1 << 24)


def _perturb(inst: Instance, rng) -> Instance:
    kind, data = inst.statement, inst.data
    if kind == "application":
        flat = [x for pair in data for x in pair]
        j = rng.below(6)
        flat[j] = _nudge(flat[j], rng)
        return Instance(kind, tuple(zip(flat[0::2], flat[1::2])))
    M, rest = data[0], data[1:]
    rows = [list(r) for r in M.entries]
    i, k = rng.below(M.n), rng.below(M.m)
    rows[i][k] = _nudge(rows[i][k], rng)
    if kind == "chebyshev":
        cols = [sorted(c, reverse=True) for c in zip(*rows)]
        return Instance(kind, (SortedMatrix(tuple(zip(*cols))),))
    return Instance(kind, (NonNegMatrix(tuple(tuple(r) for r in rows)),) + rest)


def tightness_search(kind: str, dims: tuple[int, int] | None, budget: int, seed: int,
                     spec: GenSpec | None = None) -> TightnessResult:
    """Climb the slack ratio toward 1 by random restarts and multiplicative moves.

    ``budget`` counts slack evaluations.  With ``budget == 1`` the single
    sampled instance is returned unchanged.
    """
    if kind not in TIGHT_STATEMENTS:
        raise ValueError(f"tightness search does not apply to {kind!r}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if spec is None:
        n, m = dims or (4, 2)
        spec = GenSpec(kind, n_range=(n, n), m_range=(m, m))
    restarts = max(1, budget // 200)
    per_restart = budget // restarts
    best, best_score = None, -math.inf
    evaluations = 0
    for r in range(restarts):
        rng = instance_rng(seed, r)
        current = generate(spec, rng)
        score = _score(current)
        evaluations += 1
        steps = per_restart - 1 if r < restarts - 1 else budget - evaluations
        for _ in range(steps):
            cand = _perturb(current, rng)
            s = _score(cand)
            evaluations += 1
            if s >= score:
                current, score = cand, s
        if best is None or score > best_score:
            best, best_score = current, score
    return TightnessResult(best, slack_ratio(kind, best.data), evaluations, restarts)
