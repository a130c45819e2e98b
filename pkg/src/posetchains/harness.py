"""Batch experiment driver: seeded instances, algorithm runs, result rows.

Everything an experiment produces is a pure function of (config, seed);
the only nondeterministic field is the measured wall time, which the
emitter can suppress.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chains import max_antichain, width
from .generators import gen_Rn
from .online import InvalidMoveError, OnlineInstance, first_fit, run_online
from .poset import Poset, transitive_closure
from .reduction import CompositeColorer, ReductionInvariantError
from .regular import verify_p6_p7, verify_regular

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "random_poset",
    "random_online_instance",
    "run_suite",
    "emit",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ["instance", "n", "w", "algorithm", "colors", "valid", "verdicts", "ms"]


def _rng(seed, n: int, w: int) -> random.Random:
    return random.Random(f"{seed}/{n}/{w}")


def random_poset(seed, n: int, w: int) -> Poset:
    """Seeded random order: a random DAG on 0..n-1, then extra relations
    between sampled maximum-antichain pairs until the width drops to w."""
    rng = _rng(seed, n, w)
    mat = np.zeros((n, n), dtype=bool)
    p_edge = min(1.0, 2.5 / max(n, 1))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                mat[i, j] = True
    mat = transitive_closure(mat)
    p = Poset(mat, _trusted=True)
    while width(p) > w:
        a = list(max_antichain(p))
        u, v = rng.sample(a, 2)
        new = np.array(p.less)
        new[u, v] = True
        p = Poset(transitive_closure(new), _trusted=True)
    return p


def random_online_instance(seed, n: int, w: int) -> OnlineInstance:
    """Seeded random instance: random_poset plus a shuffled presentation."""
    p = random_poset(seed, n, w)
    rng = _rng(seed, n, w)
    rng.random()  # decouple from the poset draws
    order = list(range(n))
    rng.shuffle(order)
    return OnlineInstance(p, tuple(order), w)


@dataclass(frozen=True)
class ResultRow:
    instance: str
    n: int
    w: int
    algorithm: str
    colors: int
    valid: bool
    verdicts: str
    ms: int

    def as_dict(self, include_timing: bool = True) -> dict:
        d = {
            "instance": self.instance,
            "n": self.n,
            "w": self.w,
            "algorithm": self.algorithm,
            "colors": self.colors,
            "valid": self.valid,
            "verdicts": self.verdicts,
        }
        if include_timing:
            d["ms"] = self.ms
        return d


@dataclass(frozen=True)
class ExperimentConfig:
    """A deterministic matrix of instances x algorithms.

    ``sizes`` drives seeded random instances; ``rn_sweep`` adds the
    escalator family for n in that range (inclusive).
    """

    seed: int = 0
    trials: int = 1
    sizes: tuple[tuple[int, int], ...] = ()
    algorithms: tuple[str, ...] = ("first_fit",)
    rn_sweep: tuple[int, int] | None = None
    verify: bool = True

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        doc = json.loads(text)
        return cls(
            seed=int(doc.get("seed", 0)),
            trials=int(doc.get("trials", 1)),
            sizes=tuple((int(n), int(w)) for n, w in doc.get("sizes", [])),
            algorithms=tuple(doc.get("algorithms", ["first_fit"])),
            rn_sweep=tuple(doc["rn_sweep"]) if doc.get("rn_sweep") else None,
            verify=bool(doc.get("verify", True)),
        )


def _instances(config: ExperimentConfig):
    if config.rn_sweep:
        lo, hi = config.rn_sweep
        for n in range(lo, hi + 1):
            yield f"rn-{n}", gen_Rn(n)
    for n, w in config.sizes:
        for t in range(config.trials):
            name = f"rand-{n}x{w}-{t}"
            yield name, random_online_instance(f"{config.seed}:{t}", n, w)


def _run_one(name: str, inst: OnlineInstance, algorithm: str, verify: bool) -> ResultRow:
    start = time.perf_counter()
    verdicts = "-"
    valid = True
    colors = 0
    try:
        if algorithm == "first_fit":
            g = first_fit(inst)
            colors = g.n_colors
            if verify:
                from .online import verify_grundy

                v = verify_grundy(inst.poset, g)
                verdicts = "grundy=ok" if v else f"grundy={v.condition}"
                valid = bool(v)
        elif algorithm == "composite":
            colorer = CompositeColorer(
                inst.width_bound,
                color_cap=max(2, inst.poset.n * inst.width_bound + 1),
                check=verify,
            )
            part = run_online(colorer, inst)
            part.validate(inst.poset)
            colors = part.n_chains
            if verify:
                checks = []
                for level, reg in sorted(colorer.regular_instances().items()):
                    ok = verify_regular(reg).ok and verify_p6_p7(reg).ok
                    checks.append(f"regular-w{level}={'ok' if ok else 'fail'}")
                    valid = valid and ok
                verdicts = ";".join(checks) if checks else "-"
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
    except (InvalidMoveError, ReductionInvariantError) as exc:
        valid = False
        verdicts = f"error={type(exc).__name__}"
    ms = int((time.perf_counter() - start) * 1000)
    return ResultRow(name, inst.poset.n, inst.width_bound, algorithm, colors, valid, verdicts, ms)


def run_suite(config: ExperimentConfig) -> list[ResultRow]:
    rows = []
    for name, inst in _instances(config):
        for algorithm in config.algorithms:
            rows.append(_run_one(name, inst, algorithm, config.verify))
    return rows


def emit(
    rows: Sequence[ResultRow],
    fmt: str = "csv",
    path: str | None = None,
    include_timing: bool = True,
) -> str:
    """Render rows as csv or json; write to ``path`` when given."""
    if fmt == "csv":
        buf = io.StringIO()
        cols = CSV_COLUMNS if include_timing else CSV_COLUMNS[:-1]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_dict(include_timing))
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([row.as_dict(include_timing) for row in rows], indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
