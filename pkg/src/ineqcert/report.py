"""Verification campaigns and their JSON/CSV reports.

Everything in a report except ``runtime_ms`` is a pure function of the
command line, so two runs with the same seed give byte-identical output
once that field is masked.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from . import __version__
from .generate import GenSpec, generate_indexed
from .inequalities import CheckConfig, Outcome, Verdict
from .instances import Instance, check_instance, instance_to_json

COUNT_KEYS = {Outcome.HOLDS: "holds", Outcome.EQUALITY: "equality",
              Outcome.UNDETERMINED: "undetermined", Outcome.VIOLATED: "violated"}

EXIT_OK, EXIT_VIOLATED, EXIT_UNDETERMINED, EXIT_USAGE = 0, 1, 2, 3


@dataclass(frozen=True)
class TrialResult:
    index: int
    instance: Instance
    verdict: Verdict


def run_campaign(spec: GenSpec, trials: int, seed: int, cfg: CheckConfig) -> list[TrialResult]:
    """Trial ``i`` depends only on ``(seed, i)``, so results may be computed in any order."""
    out = []
    for i in range(trials):
        inst = generate_indexed(spec, seed, i)
        out.append(TrialResult(i, inst, check_instance(inst, cfg)))
    return out


@dataclass
class Report:
    command: list[str]
    seed: int
    trials: int
    statement: str
    parameters: dict
    counts: dict = field(default_factory=lambda: {k: 0 for k in COUNT_KEYS.values()})
    violated_witnesses: list = field(default_factory=list)
    runtime_ms: int = 0
    tool_version: str = __version__

    @classmethod
    def from_results(cls, command, seed, statement, parameters, results: list[TrialResult],
                     runtime_ms: int) -> "Report":
        rep = cls(list(command), seed, len(results), statement, parameters, runtime_ms=runtime_ms)
        for r in results:
            rep.counts[COUNT_KEYS[r.verdict.outcome]] += 1
            if r.verdict.outcome is Outcome.VIOLATED:
                rep.violated_witnesses.append({"index": r.index,
                                               "instance": instance_to_json(r.instance),
                                               "verdict": r.verdict.to_json()})
        return rep

    def exit_code(self, max_undetermined: int | None) -> int:
        if self.counts["violated"]:
            return EXIT_VIOLATED
        if max_undetermined is not None and self.counts["undetermined"] > max_undetermined:
            return EXIT_UNDETERMINED
        return EXIT_OK

    def to_json(self) -> dict:
        return {"command": self.command, "seed": self.seed, "trials": self.trials,
                "statement": self.statement, "parameters": self.parameters,
                "counts": dict(self.counts), "violated_witnesses": self.violated_witnesses,
                "runtime_ms": self.runtime_ms, "tool_version": self.tool_version}

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def mask_runtime(text: str) -> str:
    """The report text with ``runtime_ms`` zeroed, for reproducibility checks."""
    data = json.loads(text)
    data["runtime_ms"] = 0
    return dumps(data)


CSV_FIELDS = ("index", "statement", "n", "m", "outcome", "gap_bound", "instance")


def results_csv(results: list[TrialResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in results:
        n, m = r.instance.shape
        gap = r.verdict.to_json().get("gap_bound", "")
        writer.writerow([r.index, r.instance.statement, n, m, r.verdict.outcome.value, gap,
                         json.dumps(instance_to_json(r.instance), separators=(",", ":"))])
    return buf.getvalue()


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int((time.perf_counter() - self.start) * 1000)
