"""Counter benchmarks for the search programs extracted from induction proofs.

The benchmarked entry must have one open assumption, free variables ``n: nat``
and ``f: nat => bool``, and a nulltype challenge (the ``linear_search`` entry).
A candidate ``k`` refutes the assumption exactly when ``f k`` is true.
"""
from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ..extraction import Kind, InductionMode, Variant, assemble, extract
from ..terms import Term, free_var_types
from .corpus import CorpusEntry
from .evaluator import EvalConfig, Instrumentation, evaluate
from .model import FiniteModel, enumerate_values

# the configurations reported by ``bench``
BENCH_VARIANTS = {
    "naive": Variant(Kind.QUASILINEAR, InductionMode.NAIVE),
    "simultaneous": Variant(Kind.QUASILINEAR, InductionMode.SIMULTANEOUS),
    "simultaneous-reversed": Variant(Kind.QUASILINEAR, InductionMode.SIMULTANEOUS, True),
    "flagged": Variant(Kind.QUASILINEAR, InductionMode.FLAGGED),
    "marked": Variant(Kind.MARKED, InductionMode.SIMULTANEOUS),
    "marked-flagged": Variant(Kind.MARKED, InductionMode.FLAGGED),
}


@dataclass
class BenchResult:
    variant: Variant
    n: int
    k: Optional[int]
    value: object
    stats: Instrumentation

    def row(self, entry: str, verdict: str = "") -> dict:
        return {"entry": entry, "variant": self.variant.kind.value,
                "mode": self.variant.induction.value + ("-reversed" if self.variant.reversed else ""),
                "n": self.n, "K": "" if self.k is None else self.k,
                "tc_checks": self.stats.tc_checks, "rec_unfolds": self.stats.rec_unfolds,
                "beta_steps": self.stats.beta_steps, "verdict": verdict}


@lru_cache(maxsize=64)
def _search_term(entry: CorpusEntry, variant: Variant) -> Term:
    res = extract(entry.proof, variant)
    minus = assemble(res).minus
    if len(minus) != 1:
        raise ValueError(f"{entry.name} must have exactly one open assumption")
    return next(iter(minus.values()))


def search_table(n: int, k: Optional[int], tail: str = "ff",
                 rng: Optional[random.Random] = None) -> list[bool]:
    """Values of ``f`` on ``0..n+1`` whose first refuting candidate is ``k``.

    ``tail`` decides the entries after ``k``: all false, all true, or random.
    """
    f = [False] * (n + 2)
    if k is None:
        return f
    f[k] = True
    rng = rng or random.Random(0)
    for i in range(k + 1, n + 2):
        if tail == "tt":
            f[i] = True
        elif tail == "random":
            f[i] = rng.random() < 0.5
    return f


def bench_induction(entry: CorpusEntry, n: int, k: Optional[int], variant: Variant,
                    tail: str = "ff", rng: Optional[random.Random] = None,
                    cfg: EvalConfig = EvalConfig()) -> BenchResult:
    """Evaluate the counterexample search at ``n`` with the first refuting candidate at ``k``."""
    t = _search_term(entry, variant)
    model = FiniteModel(nat_bound=n + 1, bindings={"n": n, "f": search_table(n, k, tail, rng)})
    # realizers of the assumption do not influence the search; any value will do
    env = {name: enumerate_values(ty, model)[0]
           for name, ty in free_var_types(t).items() if name not in ("n", "f")}
    value, stats = evaluate(t, model, cfg, env)
    return BenchResult(variant, n, k, value, stats)


def bench_modes(entry: CorpusEntry, n: int, k: Optional[int], tail: str = "ff",
                modes: Optional[list[str]] = None) -> dict[str, BenchResult]:
    return {m: bench_induction(entry, n, k, BENCH_VARIANTS[m], tail)
            for m in (modes or list(BENCH_VARIANTS))}


def draw_k(n: int, dist: str, rng: random.Random) -> int:
    if dist == "uniform":
        return rng.randrange(n)
    if dist == "geometric":
        # success probability 1/8, truncated to the candidate range
        k = 0
        while rng.random() >= 0.125 and k < n - 1:
            k += 1
        return k
    raise ValueError(f"unknown distribution {dist!r}")


def expected_k(n: int, dist: str) -> float:
    if dist == "uniform":
        return (n - 1) / 2
    p = 0.125
    return sum(k * p * (1 - p) ** k for k in range(n - 1)) + (n - 1) * (1 - p) ** (n - 1)


def bench_average(entry: CorpusEntry, n: int, trials: int, dist: str = "uniform",
                  seed: int = 0, variant: Variant = BENCH_VARIANTS["flagged"]) -> dict:
    """Mean and median counters over ``trials`` random search instances."""
    rng = random.Random(f"{seed}:bench:{dist}:{n}")
    ks, checks, unfolds = [], [], []
    for _ in range(trials):
        k = draw_k(n, dist, rng)
        r = bench_induction(entry, n, k, variant, tail="random", rng=rng)
        ks.append(k)
        checks.append(r.stats.tc_checks)
        unfolds.append(r.stats.rec_unfolds)
    return {"entry": entry.name, "variant": variant.name, "n": n, "trials": trials,
            "dist": dist, "seed": seed, "expected_k": expected_k(n, dist),
            "mean_k": statistics.fmean(ks),
            "mean_tc_checks": statistics.fmean(checks),
            "median_tc_checks": statistics.median(checks),
            "mean_rec_unfolds": statistics.fmean(unfolds),
            "median_rec_unfolds": statistics.median(unfolds)}
