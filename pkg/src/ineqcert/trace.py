"""Proof traces: each m-fold claim as a chain of two-term (or triangle) cases.

A trace is a linear chain.  Steps are listed from the top level down, in the
order the induction consumes them, and the ``base`` record is the classical
two-term statement (the triangle for Menelaus) the chain bottoms out in.
Every record carries its own data, so it can be re-checked from JSON alone.
:func:`verify_trace` checks each record, re-derives all bookkeeping from the
instance, and then composes the verdicts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_numeric import Const, Pow, eprod, esum, format_rational, parse_rational
from .inequalities import (
    DEFAULT_CONFIG,
    EQUALITY,
    CheckConfig,
    InvalidInstance,
    NonNegMatrix,
    Outcome,
    SortedMatrix,
    Verdict,
    check_minkowski,
    decide,
    powered_proportional,
    validate_holder,
)
from .instances import Instance, instance_from_json, instance_to_json
from .menelaus import (
    GeometryError,
    Line,
    MenelausCutStep,
    Polygon,
    collinear_ratio,
    diagonal_cuts,
    transversal_points,
)


class MalformedTrace(ValueError):
    pass


def _vec(values) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


def _vec_json(values) -> list[str]:
    return [format_rational(v) for v in values]


def _times(u, v):
    return tuple(x * y for x, y in zip(u, v))


def _plus(u, v):
    return tuple(x + y for x, y in zip(u, v))


def _mean(u) -> Fraction:
    return sum(u, Fraction(0)) / len(u)


def _is_zero(u) -> bool:
    return all(x == 0 for x in u)


# ---------------------------------------------------------------------------
# Step and base records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolderPair:
    """Two-term Hölder: ``sum u*w <= (sum u^p)^(1/p) (sum w^q)^(1/q)``."""

    left: tuple[Fraction, ...]
    right: tuple[Fraction, ...]
    p: Fraction
    q: Fraction

    kind = "holder_base"

    def sides(self):
        lhs = Const(sum(_times(self.left, self.right), Fraction(0)))
        rhs = (Pow(esum(Pow(Const(x), self.p) for x in self.left), 1 / self.p)
               * Pow(esum(Pow(Const(x), self.q) for x in self.right), 1 / self.q))
        return lhs, rhs

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        conjugate = 1 / self.p + 1 / self.q == 1 and self.p > 1 and self.q > 1
        if cfg.equality_detection and conjugate and (
                _is_zero(self.left) or _is_zero(self.right)
                or powered_proportional(self.left, self.p, self.right, self.q)):
            return EQUALITY
        return decide(*self.sides(), cfg)

    def to_json(self) -> dict:
        return {"kind": self.kind, "left": _vec_json(self.left), "right": _vec_json(self.right),
                "p": format_rational(self.p), "q": format_rational(self.q)}

    @classmethod
    def from_json(cls, d: dict) -> "HolderPair":
        return cls(_vec(d["left"]), _vec(d["right"]), parse_rational(d["p"]), parse_rational(d["q"]))


@dataclass(frozen=True)
class HolderSplitStep:
    """Split at ``level`` j: column j-1 against the merged tail ``w_j``.

    With ``derived_p`` the exponent of the merged pair, the step inequality is
    ``sum (u w)^dp <= (sum u^(dp t1))^(1/t1) (sum w^(dp t2))^(1/t2)``.
    """

    level: int
    derived_p: Fraction
    t1: Fraction
    t2: Fraction
    left_exponent: Fraction
    right_exponent: Fraction
    left: tuple[Fraction, ...]
    right: tuple[Fraction, ...]

    kind = "holder_split"

    def sides(self):
        dp = self.derived_p
        lhs = esum(Pow(Const(x), dp) for x in _times(self.left, self.right))
        rhs = (Pow(esum(Pow(Const(x), dp * self.t1) for x in self.left), 1 / self.t1)
               * Pow(esum(Pow(Const(x), dp * self.t2) for x in self.right), 1 / self.t2))
        return lhs, rhs

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        conjugate = 1 / self.t1 + 1 / self.t2 == 1 and self.t1 > 1 and self.t2 > 1
        if cfg.equality_detection and conjugate and (
                _is_zero(self.left) or _is_zero(self.right)
                or powered_proportional(self.left, self.derived_p * self.t1,
                                        self.right, self.derived_p * self.t2)):
            return EQUALITY
        return decide(*self.sides(), cfg)

    def bookkeeping(self) -> list[str]:
        problems = []
        if 1 / self.t1 + 1 / self.t2 != 1:
            problems.append(f"level {self.level}: 1/t1 + 1/t2 != 1")
        if not (self.t1 > 1 and self.t2 > 1):
            problems.append(f"level {self.level}: t1, t2 must exceed 1")
        if self.derived_p * self.t1 != self.left_exponent:
            problems.append(f"level {self.level}: p*t1 != p_(j-1)")
        if self.derived_p * self.t2 != self.right_exponent:
            problems.append(f"level {self.level}: p*t2 != p_j")
        return problems

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level,
                "derived_p": format_rational(self.derived_p),
                "t1": format_rational(self.t1), "t2": format_rational(self.t2),
                "left_exponent": format_rational(self.left_exponent),
                "right_exponent": format_rational(self.right_exponent),
                "left": _vec_json(self.left), "right": _vec_json(self.right)}

    @classmethod
    def from_json(cls, d: dict) -> "HolderSplitStep":
        return cls(int(d["level"]), parse_rational(d["derived_p"]), parse_rational(d["t1"]),
                   parse_rational(d["t2"]), parse_rational(d["left_exponent"]),
                   parse_rational(d["right_exponent"]), _vec(d["left"]), _vec(d["right"]))


@dataclass(frozen=True)
class MinkowskiPeelStep:
    """``||head + rest||_p <= ||head||_p + ||rest||_p``; ``column`` is 1-based."""

    column: int
    p: Fraction
    head: tuple[Fraction, ...]
    rest: tuple[Fraction, ...]

    kind = "minkowski_peel"

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        return check_minkowski(NonNegMatrix.from_columns([self.head, self.rest]), self.p, cfg)

    def to_json(self) -> dict:
        return {"kind": self.kind, "column": self.column, "p": format_rational(self.p),
                "head": _vec_json(self.head), "rest": _vec_json(self.rest)}

    @classmethod
    def from_json(cls, d: dict) -> "MinkowskiPeelStep":
        return cls(int(d["column"]), parse_rational(d["p"]), _vec(d["head"]), _vec(d["rest"]))


@dataclass(frozen=True)
class ChebyshevPeelStep:
    """``mean(prod * column) >= mean(prod) * mean(column)``.

    ``product`` is the running row product of the first ``columns_used``
    columns and must be nonincreasing for the two-term case to apply.
    """

    columns_used: int
    product: tuple[Fraction, ...]
    column: tuple[Fraction, ...]

    kind = "chebyshev_peel"

    @property
    def product_nonincreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.product, self.product[1:]))

    def sides(self):
        lhs = Const(_mean(_times(self.product, self.column)))
        rhs = Const(_mean(self.product) * _mean(self.column))
        return lhs, rhs

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        return decide(*self.sides(), cfg, relation=">=")

    def to_json(self) -> dict:
        return {"kind": self.kind, "columns_used": self.columns_used,
                "product": _vec_json(self.product), "column": _vec_json(self.column)}

    @classmethod
    def from_json(cls, d: dict) -> "ChebyshevPeelStep":
        return cls(int(d["columns_used"]), _vec(d["product"]), _vec(d["column"]))


@dataclass(frozen=True)
class MenelausTriangle:
    polygon: Polygon
    line: Line
    ratios: tuple[Fraction, Fraction, Fraction]

    kind = "menelaus_triangle"

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        product = self.ratios[0] * self.ratios[1] * self.ratios[2]
        if product == 1:
            return EQUALITY
        return Verdict(Outcome.VIOLATED, None, {"relation": "==", "product": format_rational(product)})

    def to_json(self) -> dict:
        return {"kind": self.kind, "polygon": self.polygon.to_json(), "line": self.line.to_json(),
                "ratios": _vec_json(self.ratios)}

    @classmethod
    def from_json(cls, d: dict) -> "MenelausTriangle":
        return cls(Polygon.from_json(d["polygon"]), Line.from_json(d["line"]), _vec(d["ratios"]))


def _check_cut(step: MenelausCutStep, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    tri, rem = step.triangle_product, step.remainder_product
    if tri == 1 and rem == 1:
        return EQUALITY
    return Verdict(Outcome.VIOLATED, None, {"relation": "==", "triangle_product": format_rational(tri),
                                            "remainder_product": format_rational(rem)})


@dataclass(frozen=True)
class TrivialBase:
    """The one-column identity that needs no inequality at all."""

    note: str

    kind = "trivial"

    def check(self, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
        return EQUALITY

    def to_json(self) -> dict:
        return {"kind": self.kind, "note": self.note}

    @classmethod
    def from_json(cls, d: dict) -> "TrivialBase":
        return cls(d["note"])


_RECORDS = {cls.kind: cls for cls in (HolderPair, HolderSplitStep, MinkowskiPeelStep,
                                       ChebyshevPeelStep, MenelausTriangle, TrivialBase)}


def _check_record(record, cfg: CheckConfig) -> Verdict:
    if isinstance(record, MenelausCutStep):
        return _check_cut(record, cfg)
    return record.check(cfg)


def _record_from_json(d: dict):
    kind = d.get("kind")
    if kind == MenelausCutStep.kind:
        return MenelausCutStep.from_json(d)
    if kind not in _RECORDS:
        raise MalformedTrace(f"unknown record kind {kind!r}")
    return _RECORDS[kind].from_json(d)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofTrace:
    statement: str
    instance: Instance
    steps: tuple
    base: object
    base_case_count: int

    def to_json(self) -> dict:
        return {"statement": self.statement,
                "instance": instance_to_json(self.instance),
                "steps": [s.to_json() for s in self.steps],
                "base": self.base.to_json(),
                "base_case_count": self.base_case_count}

    @classmethod
    def from_json(cls, d: dict) -> "ProofTrace":
        try:
            return cls(d["statement"], instance_from_json(d["instance"]),
                       tuple(_record_from_json(s) for s in d["steps"]),
                       _record_from_json(d["base"]), int(d["base_case_count"]))
        except KeyError as exc:
            raise MalformedTrace(f"missing field {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class TraceVerdict:
    steps: tuple[Verdict, ...]
    base: Verdict
    overall: Verdict
    bookkeeping_ok: bool
    problems: tuple[str, ...] = field(default=())

    @property
    def any_step_violated(self) -> bool:
        return any(v.outcome is Outcome.VIOLATED for v in self.steps + (self.base,))

    def to_json(self) -> dict:
        return {"steps": [v.to_json() for v in self.steps], "base": self.base.to_json(),
                "overall": self.overall.to_json(), "bookkeeping_ok": self.bookkeeping_ok,
                "problems": list(self.problems)}


def _tail_exponents(p: Sequence[Fraction]) -> list[Fraction | None]:
    """``q[j]`` (0-based) with ``1/q[j] = sum_{k >= j} 1/p[k]``."""
    out: list[Fraction | None] = [None] * len(p)
    acc = Fraction(0)
    for j in range(len(p) - 1, -1, -1):
        acc += 1 / p[j]
        out[j] = 1 / acc
    return out


def _tail_products(columns) -> list[tuple[Fraction, ...]]:
    out = [None] * len(columns)
    acc = tuple(Fraction(1) for _ in columns[0])
    for j in range(len(columns) - 1, -1, -1):
        acc = _times(columns[j], acc)
        out[j] = acc
    return out


def _head_products(columns) -> list[tuple[Fraction, ...]]:
    out = []
    acc = tuple(Fraction(1) for _ in columns[0])
    for col in columns:
        acc = _times(acc, col)
        out.append(acc)
    return out


def _tail_sums(columns) -> list[tuple[Fraction, ...]]:
    out = [None] * len(columns)
    acc = tuple(Fraction(0) for _ in columns[0])
    for j in range(len(columns) - 1, -1, -1):
        acc = _plus(columns[j], acc)
        out[j] = acc
    return out


def holder_trace(M: NonNegMatrix, P) -> ProofTrace:
    validate_holder(M, P)
    cols, p = M.columns, P.p
    m = M.m
    q = _tail_exponents(p)
    w = _tail_products(cols)
    steps = []
    # level j (1-based) merges column j-1 with the tail w_j; 0-based indices below
    for level in range(m, 2, -1):
        left, right = level - 2, level - 1
        dp = q[left]
        steps.append(HolderSplitStep(level, dp, p[left] / dp, q[right] / dp,
                                     p[left], q[right], cols[left], w[right]))
    base = HolderPair(cols[0], w[1], p[0], q[1])
    return ProofTrace("holder", Instance("holder", (M, P)), tuple(steps), base, len(steps) + 1)


def minkowski_trace(M: NonNegMatrix, p) -> ProofTrace:
    p = parse_rational(p)
    if p < 1:
        raise InvalidInstance(f"Minkowski needs p >= 1, got {p}")
    inst = Instance("minkowski", (M, p))
    if M.m == 1:
        return ProofTrace("minkowski", inst, (), TrivialBase("m = 1: both sides are the same norm"), 0)
    cols = M.columns
    rest = _tail_sums(cols)
    steps = tuple(MinkowskiPeelStep(j + 1, p, cols[j], rest[j + 1]) for j in range(M.m - 2))
    base = MinkowskiPeelStep(M.m - 1, p, cols[-2], cols[-1])
    return ProofTrace("minkowski", inst, steps, base, len(steps) + 1)


def chebyshev_trace(S: NonNegMatrix) -> ProofTrace:
    if not isinstance(S, SortedMatrix):
        S = SortedMatrix(S.entries)
    inst = Instance("chebyshev", (S,))
    if S.m == 1:
        return ProofTrace("chebyshev", inst, (), TrivialBase("m = 1: both sides are the mean"), 0)
    cols = S.columns
    heads = _head_products(cols)
    # top level first: the last column against the product of all earlier ones
    steps = tuple(ChebyshevPeelStep(j, heads[j - 1], cols[j]) for j in range(S.m - 1, 1, -1))
    base = ChebyshevPeelStep(1, cols[0], cols[1])
    return ProofTrace("chebyshev", inst, steps, base, len(steps) + 1)


def menelaus_decompose(polygon: Polygon, line: Line) -> ProofTrace:
    cuts = diagonal_cuts(polygon, line)
    last = cuts[-1].remainder if cuts else polygon
    base = MenelausTriangle(last, line, transversal_points(last, line).ratios)
    inst = Instance("menelaus", (polygon, line))
    return ProofTrace("menelaus", inst, tuple(cuts), base, len(cuts) + 1)


def build_trace(inst: Instance) -> ProofTrace:
    kind = inst.statement
    if kind == "holder":
        return holder_trace(*inst.data)
    if kind == "minkowski":
        return minkowski_trace(*inst.data)
    if kind == "chebyshev":
        return chebyshev_trace(*inst.data)
    if kind == "menelaus":
        return menelaus_decompose(*inst.data)
    raise ValueError(f"no trace for statement {kind!r}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _compose(links: Sequence[tuple[Verdict, bool]]) -> Verdict:
    """Compose a chain of ``<=`` links; the flag marks a zero multiplier.

    A link multiplied by zero contributes ``0 <= 0`` whatever it says.
    """
    live = [v for v, dead in links if not dead]
    outcomes = {v.outcome for v in live}
    if Outcome.VIOLATED in outcomes or Outcome.UNDETERMINED in outcomes:
        gaps = [v.gap_bound for v in live if v.gap_bound is not None]
        return Verdict(Outcome.UNDETERMINED, max(gaps) if gaps else None,
                       {"reason": "a link is not certified"})
    if Outcome.HOLDS in outcomes:
        return Verdict(Outcome.HOLDS)
    return EQUALITY


def _holder_bookkeeping(t: ProofTrace) -> tuple[list[str], list[bool]]:
    M, P = t.instance.data
    cols, p, m = M.columns, P.p, M.m
    q = _tail_exponents(p)
    w = _tail_products(cols)
    problems: list[str] = []
    if len(t.steps) != m - 2:
        problems.append(f"expected {m - 2} split steps, found {len(t.steps)}")
        return problems, []
    dead = []
    for idx, step in enumerate(t.steps):
        if not isinstance(step, HolderSplitStep):
            raise MalformedTrace("Hölder trace holds a foreign step")
        level = m - idx
        left, right = level - 2, level - 1
        problems += step.bookkeeping()
        if step.level != level:
            problems.append(f"step {idx}: level {step.level}, expected {level}")
        if step.left != cols[left] or step.right != w[right]:
            problems.append(f"level {level}: step columns do not match the instance")
        if step.left_exponent != p[left] or step.right_exponent != q[right]:
            problems.append(f"level {level}: step exponents do not match the instance")
        if sum(1 / pk for pk in p[:left]) + 1 / step.derived_p != 1:
            problems.append(f"level {level}: reduced exponents are not conjugate")
        # multiplier: product of the norms of columns before the split
        dead.append(any(_is_zero(c) for c in cols[:left]))
    base = t.base
    if not isinstance(base, HolderPair):
        raise MalformedTrace("Hölder trace needs a Hölder base")
    if base.left != cols[0] or base.right != w[1] or base.p != p[0] or base.q != q[1]:
        problems.append("base case does not match the instance")
    if sum(_times(base.left, base.right), Fraction(0)) != sum(w[0], Fraction(0)):
        problems.append("base left side differs from the full left side")
    # compose right sides: S_k are column power sums, T_j tail power sums
    exps: dict[tuple[str, int], Fraction] = {("S", 0): 1 / base.p, ("T", 1): 1 / base.q}
    for step in reversed(t.steps):
        j = step.level - 1  # 0-based index of the tail this step expands
        tail = exps.pop(("T", j - 1), None)
        if tail is None or tail != 1 / step.derived_p:
            problems.append(f"level {step.level}: nothing to expand in the composed bound")
            break
        exps[("S", j - 1)] = exps.get(("S", j - 1), 0) + 1 / (step.t1 * step.derived_p)
        exps[("T", j)] = exps.get(("T", j), 0) + 1 / (step.t2 * step.derived_p)
    last = exps.pop(("T", m - 1), None)
    if last is not None:
        exps[("S", m - 1)] = exps.get(("S", m - 1), 0) + last
    if exps != {("S", k): 1 / p[k] for k in range(m)}:
        problems.append("composed bound differs from the full right side")
    return problems, dead


def _minkowski_bookkeeping(t: ProofTrace) -> list[str]:
    M, p = t.instance.data
    cols, m = M.columns, M.m
    if m == 1:
        return [] if not t.steps and isinstance(t.base, TrivialBase) else ["m = 1 needs an empty trace"]
    rest = _tail_sums(cols)
    problems = []
    if len(t.steps) != m - 2:
        problems.append(f"expected {m - 2} peel steps, found {len(t.steps)}")
        return problems
    chain = list(t.steps) + [t.base]
    for j, step in enumerate(chain):
        if not isinstance(step, MinkowskiPeelStep):
            raise MalformedTrace("Minkowski trace holds a foreign step")
        if step.p != p:
            problems.append(f"column {j + 1}: exponent differs from the instance")
        if step.head != cols[j] or step.rest != rest[j + 1]:
            problems.append(f"column {j + 1}: peeled vectors do not match the instance")
    # telescoping: what one step leaves over is exactly what the next one splits
    if _plus(chain[0].head, chain[0].rest) != rest[0]:
        problems.append("first step does not cover the full column sum")
    for a, b in zip(chain, chain[1:]):
        if a.rest != _plus(b.head, b.rest):
            problems.append(f"column {a.column}: remainder does not telescope")
    return problems


def _chebyshev_bookkeeping(t: ProofTrace) -> tuple[list[str], list[bool], bool]:
    (S,) = t.instance.data
    cols, m = S.columns, S.m
    if m == 1:
        ok = not t.steps and isinstance(t.base, TrivialBase)
        return ([] if ok else ["m = 1 needs an empty trace"]), [], True
    heads = _head_products(cols)
    problems = []
    if len(t.steps) != m - 2:
        problems.append(f"expected {m - 2} peel steps, found {len(t.steps)}")
        return problems, [], False
    chain = list(t.steps) + [t.base]
    dead = []
    lemma = True
    for idx, step in enumerate(chain):
        if not isinstance(step, ChebyshevPeelStep):
            raise MalformedTrace("Chebyshev trace holds a foreign step")
        used = m - 1 - idx
        if step.columns_used != used:
            problems.append(f"step {idx}: uses {step.columns_used} columns, expected {used}")
        if step.product != heads[used - 1] or step.column != cols[used]:
            problems.append(f"step {idx}: vectors do not match the instance")
        if not step.product_nonincreasing:
            lemma = False
            problems.append(f"step {idx}: running product is not nonincreasing")
        dead.append(any(_is_zero(c) for c in cols[used + 1:]))
    full_lhs = _mean(heads[-1])
    full_rhs = Fraction(1)
    for c in cols:
        full_rhs *= _mean(c)
    if _mean(_times(chain[0].product, chain[0].column)) != full_lhs:
        problems.append("top step left side differs from the full left side")
    composed = _mean(chain[-1].product)
    for step in chain:
        composed *= _mean(step.column)
    if composed != full_rhs:
        problems.append("composed bound differs from the full right side")
    return problems, dead, lemma


def _menelaus_bookkeeping(t: ProofTrace) -> list[str]:
    polygon, line = t.instance.data
    problems = []
    if len(t.steps) != polygon.n - 3:
        problems.append(f"expected {polygon.n - 3} cut steps, found {len(t.steps)}")
        return problems
    current = polygon
    for idx, step in enumerate(t.steps):
        if not isinstance(step, MenelausCutStep):
            raise MalformedTrace("Menelaus trace holds a foreign step")
        if step.polygon != current or step.line != line:
            problems.append(f"cut {idx}: polygon does not continue the chain")
            break
        try:
            a, b = step.cut_factors()
            tri = transversal_points(step.triangle, line).ratios
            rem = transversal_points(step.remainder, line).ratios
            full = transversal_points(current, line).product
        except GeometryError as exc:
            problems.append(f"cut {idx}: {exc}")
            break
        if a * b != 1:
            problems.append(f"cut {idx}: diagonal factors do not cancel")
        if tri != step.triangle_ratios or rem != step.remainder_ratios:
            problems.append(f"cut {idx}: recorded ratios disagree with the geometry")
        if step.triangle_product * step.remainder_product != full:
            problems.append(f"cut {idx}: sub-products do not multiply to the full product")
        if collinear_ratio(step.cut_point, *step.diagonal) != a:
            problems.append(f"cut {idx}: cut point is off the diagonal")
        current = step.remainder
    base = t.base
    if not isinstance(base, MenelausTriangle) or base.polygon != current or base.line != line:
        problems.append("base triangle does not end the chain")
    elif transversal_points(base.polygon, line).ratios != base.ratios:
        problems.append("base ratios disagree with the geometry")
    return problems


def verify_trace(t: ProofTrace, cfg: CheckConfig = DEFAULT_CONFIG) -> TraceVerdict:
    step_verdicts = tuple(_check_record(s, cfg) for s in t.steps)
    base_verdict = _check_record(t.base, cfg)
    kind = t.statement
    if kind != t.instance.statement:
        raise MalformedTrace("trace statement differs from its instance")
    if kind == "holder":
        problems, dead = _holder_bookkeeping(t)
        links = [(base_verdict, False)] + list(zip(step_verdicts, dead or [False] * len(step_verdicts)))
    elif kind == "minkowski":
        problems = _minkowski_bookkeeping(t)
        links = [(v, False) for v in step_verdicts + (base_verdict,)]
    elif kind == "chebyshev":
        problems, dead, _ = _chebyshev_bookkeeping(t)
        verdicts = step_verdicts + (base_verdict,)
        links = list(zip(verdicts, dead or [False] * len(verdicts)))
    elif kind == "menelaus":
        problems = _menelaus_bookkeeping(t)
        links = [(v, False) for v in step_verdicts + (base_verdict,)]
    else:
        raise MalformedTrace(f"unknown statement {kind!r}")
    expected_bases = len(t.steps) + 1
    if kind in ("minkowski", "chebyshev") and isinstance(t.base, TrivialBase):
        expected_bases = 0
    if t.base_case_count != expected_bases:
        problems.append(f"base_case_count {t.base_case_count}, expected {expected_bases}")
    ok = not problems
    overall = _compose(links)
    if not ok:
        overall = Verdict(Outcome.UNDETERMINED, None, {"reason": "bookkeeping failed"})
    return TraceVerdict(step_verdicts, base_verdict, overall, ok, tuple(problems))
