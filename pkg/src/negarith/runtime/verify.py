"""Per-instance soundness checks for extracted programs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Optional, Sequence

from ..dialectica import char_body, tau
from ..extraction import QUASILINEAR, Variant, assemble, extract, param_name
from ..logic import Formula, Proof
from ..sexpr import show_term
from ..terms import Term, free_var_types, mk_app, mk_var
from ..types import EPS, TypeExpr
from .evaluator import EvalConfig, Evaluator, Instrumentation, Thunk, run_deep
from .model import FiniteModel, UnboundModelVariable, enumerate_values

_Y = "y%challenge"
_R = "r%witness"
_S = "s%value"


@dataclass
class VerdictRecord:
    variant: str
    instance: dict
    premise: bool
    conclusion: bool
    condition_ii: bool
    markers: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        ok = (self.conclusion or not self.premise) and self.condition_ii
        return "PASS" if ok else "FAIL"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "variant": self.variant, "instance": self.instance,
                "premise": self.premise, "conclusion": self.conclusion,
                "condition_ii": self.condition_ii, "markers": self.markers, **self.stats}


class Verifier:
    """Extracts once and evaluates the soundness statement at many instances."""

    def __init__(self, proof: Proof, variant: Variant = QUASILINEAR,
                 free_types: Optional[Mapping[str, TypeExpr]] = None,
                 cfg: EvalConfig = EvalConfig()):
        self.proof, self.variant, self.cfg = proof, variant, cfg
        self.res = extract(proof, variant)
        self.asm = assemble(self.res)
        marked = variant.marked
        a = self.res.formula
        self.formula = a
        ta = tau(a, marked)
        self.y_type = ta.minus
        yv = mk_var(_Y, ta.minus)
        self.conclusion = char_body(a, mk_var(_R, ta.star), yv, marked)
        self.plus = self.asm.plus
        self.assumptions: dict[str, Formula] = dict(self.res.assumptions)
        self.param_types = {param_name(u): tau(c, marked).star
                            for u, c in self.assumptions.items()}
        self.neg_apps: dict[str, Term] = {}
        self.premises: dict[str, Term] = {}
        for u, c in self.assumptions.items():
            tc = tau(c, marked)
            self.neg_apps[u] = mk_app(self.asm.minus[u], yv)
            self.premises[u] = char_body(c, mk_var(param_name(u), tc.star),
                                         mk_var(_S, tc.minus), marked)
        inner = {_R, _S, _Y, *self.param_types}
        found: dict[str, TypeExpr] = {}
        for t in [self.plus, self.conclusion, *self.neg_apps.values(), *self.premises.values()]:
            found.update(free_var_types(t))
        self.free_types = {k: v for k, v in found.items() if k not in inner}
        self.free_types.update(free_types or {})

    def space(self, model: FiniteModel) -> dict[str, list[Term]]:
        """Candidate values for every input of an instance."""
        out: dict[str, list[Term]] = {}
        for name, ty in self.free_types.items():
            b = model.binding(name, ty)
            out[name] = [b] if b is not None else enumerate_values(ty, model)
        for name, ty in self.param_types.items():
            if ty != EPS:
                out[name] = enumerate_values(ty, model)
        if self.y_type != EPS:
            out[_Y] = enumerate_values(self.y_type, model)
        return out

    def check(self, model: FiniteModel, inputs: Mapping[str, Term]) -> VerdictRecord:
        ev = Evaluator(model, self.cfg)
        for k, v in inputs.items():
            ev.bind(k, v)
        marked = self.variant.marked
        premise, cond_ii, markers = True, True, {}
        for u, c in self.assumptions.items():
            tm = tau(c, marked).minus
            w = ev.evaluate(self.neg_apps[u])
            if marked:
                pair = w if tm != EPS else None
                m = w.left.force(ev) if pair is not None else w
                s = pair.right if pair is not None else Thunk.of(None)
                markers[u] = m
            else:
                m, s = "mbot", Thunk.of(w)
            holds = bool(ev.evaluate(self.premises[u], {_S: s}))
            if m != "mtt" and not holds:
                premise = False
            if m == "mff" and holds:
                cond_ii = False
        r = Thunk(self.plus, None)
        y = {_Y: ev.lookup(_Y, None)} if self.y_type != EPS else {}
        conclusion = bool(ev.evaluate(self.conclusion, {_R: r, **y}))
        instance = {k: show_term(v) for k, v in inputs.items()}
        return VerdictRecord(self.variant.name, instance, premise, conclusion, cond_ii,
                             markers, ev.stats.as_dict())

    def instances(self, model: FiniteModel, budget: int = 1000) -> Iterator[dict]:
        """Exhaustive when the instance space has at most ``model.exhaustive_limit``
        points, otherwise ``budget`` seeded samples."""
        space = self.space(model)
        names = list(space)
        total = 1
        for n in names:
            total *= len(space[n])
        if total <= model.exhaustive_limit:
            for combo in itertools.product(*(space[n] for n in names)):
                yield dict(zip(names, combo))
            return
        rng = model.rng("instances", *names)
        for _ in range(budget):
            yield {n: rng.choice(space[n]) for n in names}

    def run(self, model: FiniteModel, budget: int = 1000,
            stop_on_fail: bool = False) -> "VerificationSummary":
        def go():
            summary = VerificationSummary(self.variant.name)
            for inst in self.instances(model, budget):
                rec = self.check(model, inst)
                summary.add(rec)
                if stop_on_fail and rec.verdict == "FAIL":
                    break
            return summary
        return run_deep(go)


@dataclass
class VerificationSummary:
    variant: str
    instances: int = 0
    failures: list = field(default_factory=list)
    premise_held: int = 0
    stats: Instrumentation = field(default_factory=Instrumentation)

    def add(self, rec: VerdictRecord) -> None:
        self.instances += 1
        self.premise_held += rec.premise
        if rec.verdict == "FAIL":
            self.failures.append(rec)

    @property
    def verdict(self) -> str:
        return "FAIL" if self.failures else "PASS"


def verify_instance(proof: Proof, variant: Variant, model: FiniteModel,
                    x_assign: Mapping[str, Term], y_value: Optional[Term] = None,
                    free_types: Optional[Mapping[str, TypeExpr]] = None) -> VerdictRecord:
    """Check the soundness statement at one instance.

    ``x_assign`` maps assumption names (or their parameter names) to realizers;
    free object variables are taken from the model's bindings.
    """
    v = Verifier(proof, variant, free_types)
    inputs: dict[str, Term] = {}
    for name, ty in v.free_types.items():
        b = model.binding(name, ty)
        if b is None:
            raise UnboundModelVariable(name)
        inputs[name] = b
    for u, c in v.assumptions.items():
        pname = param_name(u)
        if v.param_types[pname] == EPS:
            continue
        val = x_assign.get(u, x_assign.get(pname))
        if val is None:
            raise UnboundModelVariable(pname)
        inputs[pname] = val
    if v.y_type != EPS:
        if y_value is None:
            raise UnboundModelVariable("challenge")
        inputs[_Y] = y_value
    return run_deep(v.check, model, inputs)


# --------------------------------------------------------------------------
# brute-force oracles over a candidate list

def last_false(holds: Sequence[bool]) -> Optional[int]:
    for k in range(len(holds) - 1, -1, -1):
        if not holds[k]:
            return k
    return None


def first_false(holds: Sequence[bool]) -> Optional[int]:
    for k, h in enumerate(holds):
        if not h:
            return k
    return None


def candidate_truths(c: Formula, x: Term, candidates: Sequence[Term], model: FiniteModel,
                     env: Optional[Mapping[str, Any]] = None, marked: bool = False) -> list[bool]:
    """Evaluate ``|C|^x_s`` for each candidate ``s``."""
    tc = tau(c, marked)
    body = char_body(c, x, mk_var(_S, tc.minus), marked)

    def go():
        out = []
        for s in candidates:
            ev = Evaluator(model)
            for name, ty in free_var_types(body).items():
                if name == _S:
                    continue
                if env and name in env:
                    ev.bind(name, env[name])
                else:
                    b = model.binding(name, ty)
                    if b is None:
                        raise UnboundModelVariable(name)
                    ev.bind(name, b)
            out.append(bool(ev.evaluate(body, {_S: s})))
        return out
    return run_deep(go)


def brute_force_last_counterexample(c: Formula, x: Term, candidates: Sequence[Term],
                                    model: FiniteModel, env: Optional[Mapping[str, Any]] = None,
                                    marked: bool = False) -> Optional[int]:
    """Largest index whose candidate refutes ``|C|^x``, if any."""
    return last_false(candidate_truths(c, x, candidates, model, env, marked))


def brute_force_first_counterexample(c: Formula, x: Term, candidates: Sequence[Term],
                                     model: FiniteModel, env: Optional[Mapping[str, Any]] = None,
                                     marked: bool = False) -> Optional[int]:
    """Smallest index whose candidate refutes ``|C|^x``, if any."""
    return first_false(candidate_truths(c, x, candidates, model, env, marked))
