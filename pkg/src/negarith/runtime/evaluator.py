"""Instrumented call-by-need evaluator.

Arguments are passed as memoising thunks, pair components are forced only
when projected, and ``if``/``mcase`` force only the chosen branch. Counters
record recursor unfoldings, forced characteristic-term checks, beta steps and
total evaluation steps.
"""
from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from ..terms import (
    App, Check, Const, EpsTerm, FuelExhausted, Fst, Lam, Lit, Pair, Snd, Term, Var, free_var_types,
)
from ..types import BOOL, MARK, NAT, Arrow, Prod, TypeExpr
from .model import FiniteModel, FunValue, UnboundModelVariable, enumerate_values

_ARITY = {"succ": 1, "if": 3, "rec": 3, "mcase": 4, "meq": 2}


@dataclass
class Instrumentation:
    rec_unfolds: int = 0
    tc_checks: int = 0
    beta_steps: int = 0
    total_steps: int = 0
    checks_by_label: dict = field(default_factory=dict)
    # (label, outcome) for every forced check, when tracing is on
    trace: Optional[list] = None

    def add(self, other: "Instrumentation") -> "Instrumentation":
        self.rec_unfolds += other.rec_unfolds
        self.tc_checks += other.tc_checks
        self.beta_steps += other.beta_steps
        self.total_steps += other.total_steps
        for k, v in other.checks_by_label.items():
            self.checks_by_label[k] = self.checks_by_label.get(k, 0) + v
        if other.trace is not None:
            self.trace = (self.trace or []) + other.trace
        return self

    def as_dict(self) -> dict:
        return {"rec_unfolds": self.rec_unfolds, "tc_checks": self.tc_checks,
                "beta_steps": self.beta_steps, "total_steps": self.total_steps}


@dataclass(frozen=True)
class EvalConfig:
    fuel: int = 10 ** 7
    count_tc: bool = True
    trace_checks: bool = False


# --------------------------------------------------------------------------
# runtime values

class Thunk:
    __slots__ = ("term", "env", "value", "done", "fn")

    def __init__(self, term: Optional[Term] = None, env=None, fn: Optional[Callable] = None):
        self.term, self.env, self.fn = term, env, fn
        self.value, self.done = None, False

    @classmethod
    def of(cls, value) -> "Thunk":
        th = cls()
        th.value, th.done = value, True
        return th

    def force(self, ev: "Evaluator"):
        if not self.done:
            if self.fn is not None:
                v = self.fn()
            else:
                v = ev.ev(self.term, self.env)
            self.value, self.done = v, True
            self.term = self.env = self.fn = None
        return self.value


class Closure:
    __slots__ = ("name", "body", "env")

    def __init__(self, name, body, env):
        self.name, self.body, self.env = name, body, env


class Prim:
    __slots__ = ("name", "args")

    def __init__(self, name, args=()):
        self.name, self.args = name, args


class PairV:
    __slots__ = ("left", "right")

    def __init__(self, left: Thunk, right: Thunk):
        self.left, self.right = left, right


class Table:
    __slots__ = ("fun",)

    def __init__(self, fun: FunValue):
        self.fun = fun


_CONSTS = {"tt": True, "ff": False, "zero": 0, "mtt": "mtt", "mff": "mff", "mbot": "mbot"}


# --------------------------------------------------------------------------

class Evaluator:
    def __init__(self, model: Optional[FiniteModel] = None, cfg: EvalConfig = EvalConfig(),
                 globals_: Optional[Mapping[str, Any]] = None):
        self.model = model or FiniteModel()
        self.cfg = cfg
        self.stats = Instrumentation(trace=[] if cfg.trace_checks else None)
        self.globals: dict[str, Thunk] = {}
        for k, v in (globals_ or {}).items():
            self.bind(k, v)

    def bind(self, name: str, value) -> None:
        if isinstance(value, Thunk):
            self.globals[name] = value
        elif isinstance(value, Term):
            self.globals[name] = Thunk(value, None)
        else:
            self.globals[name] = Thunk.of(value)

    def tick(self) -> None:
        s = self.stats
        s.total_steps += 1
        if s.total_steps > self.cfg.fuel:
            raise FuelExhausted(f"evaluation exceeded {self.cfg.fuel} steps")

    def lookup(self, name: str, env) -> Thunk:
        while env is not None:
            if env[0] == name:
                return env[1]
            env = env[2]
        th = self.globals.get(name)
        if th is None:
            raise UnboundModelVariable(name)
        return th

    def delay(self, t: Term, env) -> Thunk:
        if type(t) is Var:
            return self.lookup(t.name, env)
        return Thunk(t, env)

    def ev(self, t: Term, env=None):
        self.tick()
        cls = type(t)
        if cls is Var:
            return self.lookup(t.name, env).force(self)
        if cls is App:
            f = self.ev(t.fn, env)
            return self.apply(f, self.delay(t.arg, env))
        if cls is Lam:
            return Closure(t.name, t.body, env)
        if cls is Pair:
            return PairV(self.delay(t.left, env), self.delay(t.right, env))
        if cls is Fst:
            return self.ev(t.arg, env).left.force(self)
        if cls is Snd:
            return self.ev(t.arg, env).right.force(self)
        if cls is Const:
            if t.name in _CONSTS:
                return _CONSTS[t.name]
            return Prim(t.name)
        if cls is Check:
            v = self.ev(t.body, env)
            if self.cfg.count_tc:
                s = self.stats
                s.tc_checks += 1
                s.checks_by_label[t.label] = s.checks_by_label.get(t.label, 0) + 1
                if s.trace is not None:
                    s.trace.append((t.label, v))
            return v
        if cls is Lit:
            if isinstance(t.value, FunValue):
                return Table(t.value)
            return t.value
        if cls is EpsTerm:
            return None
        raise TypeError(f"cannot evaluate {t!r}")

    def apply(self, f, arg: Thunk):
        cls = type(f)
        if cls is Closure:
            self.stats.beta_steps += 1
            return self.ev(f.body, (f.name, arg, f.env))
        if cls is Prim:
            args = f.args + (arg,)
            if len(args) < _ARITY[f.name]:
                return Prim(f.name, args)
            return self.fire(f.name, args)
        if cls is Table:
            fun = f.fun
            return self.ev(fun.lookup(self.key(arg.force(self), fun.dom)))
        raise TypeError(f"cannot apply {f!r}")

    def fire(self, name: str, a: tuple):
        if name == "succ":
            return a[0].force(self) + 1
        if name == "if":
            return (a[1] if a[0].force(self) else a[2]).force(self)
        if name == "rec":
            n = a[0].force(self)
            if n == 0:
                return a[1].force(self)
            self.stats.rec_unfolds += 1
            pred = Thunk.of(n - 1)
            prev = Thunk(fn=lambda: self.fire("rec", (pred, a[1], a[2])))
            step = a[2].force(self)
            return self.apply(self.apply(step, pred), prev)
        if name == "mcase":
            m = a[0].force(self)
            return {"mtt": a[1], "mff": a[2], "mbot": a[3]}[m].force(self)
        if name == "meq":
            return a[0].force(self) == a[1].force(self)
        raise TypeError(name)

    # reification ---------------------------------------------------------
    def key(self, v, ty: TypeExpr):
        """Table key of a runtime value (arguments are compared extensionally)."""
        if ty == NAT:
            return min(v, self.model.nat_bound)
        if ty == BOOL or ty == MARK:
            return v
        if isinstance(ty, Prod):
            return (self.key(v.left.force(self), ty.left), self.key(v.right.force(self), ty.right))
        if isinstance(ty, Arrow):
            return tuple(self.key(self.apply(v, Thunk(d, None)), ty.cod)
                         for d in enumerate_values(ty.dom, self.model))
        return v

    def reify(self, v, ty: TypeExpr):
        """Python rendering of a value: ints, bools, marker names, tuples."""
        if isinstance(ty, Prod):
            return (self.reify(v.left.force(self), ty.left),
                    self.reify(v.right.force(self), ty.right))
        if isinstance(ty, Arrow):
            if isinstance(v, Table):
                return v.fun
            return "<fun>"
        return v

    def evaluate(self, t: Term, env: Optional[Mapping[str, Any]] = None):
        frame = None
        for k, v in (env or {}).items():
            th = v if isinstance(v, Thunk) else (Thunk(v, None) if isinstance(v, Term) else Thunk.of(v))
            frame = (k, th, frame)
        return self.ev(t, frame)


# --------------------------------------------------------------------------
# deep recursion support

_deep = threading.local()


def run_deep(fn: Callable, *args, **kwargs):
    """Run ``fn`` on a thread with a large stack and a high recursion limit."""
    if getattr(_deep, "active", False):
        return fn(*args, **kwargs)
    box: dict = {}

    def target():
        _deep.active = True
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as e:  # re-raised in the caller
            box["error"] = e

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 400_000))
    old_size = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        th = threading.Thread(target=target)
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
    if "error" in box:
        raise box["error"]
    return box["value"]


def evaluate(t: Term, model: Optional[FiniteModel] = None, cfg: EvalConfig = EvalConfig(),
             env: Optional[Mapping[str, Any]] = None):
    """Evaluate ``t`` to weak head normal form; returns ``(value, Instrumentation)``.

    Free variables are looked up in ``env`` and then in the model's bindings.
    Ground results (and pairs of them) are reified to Python values.
    """
    model = model or FiniteModel()

    def go():
        ev = Evaluator(model, cfg)
        for name, ty in free_var_types(t).items():
            if env and name in env:
                continue
            b = model.binding(name, ty)
            if b is None:
                raise UnboundModelVariable(name)
            ev.bind(name, b)
        v = ev.evaluate(t, env)
        return ev.reify(v, t.ty), ev.stats

    return run_deep(go)
