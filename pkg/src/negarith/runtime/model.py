"""Finite models: nat truncated at a bound, function tables, value enumeration."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from ..sexpr import show_term
from ..terms import (
    FF, MBOT, MFF, MTT, TT, App, Fst, Lam, Lit, Pair, Snd, Term, Var, default_var_name, numeral,
)
from ..types import BOOL, EPS, MARK, NAT, Arrow, Prod, TypeExpr, TypeVar


class ModelError(Exception):
    pass


class UnboundModelVariable(ModelError):
    def __init__(self, name: str):
        super().__init__(f"no model binding for {name!r}")
        self.name = name


@dataclass(frozen=True)
class FunValue:
    """A finite function table; ``keys`` are reified arguments.

    Natural-number arguments above ``bound`` are read as ``bound``, so a
    table over ``0..bound`` denotes a function that is constant from there on.
    """
    dom: TypeExpr
    cod: TypeExpr
    keys: tuple
    outs: tuple
    bound: int

    @cached_property
    def index(self) -> dict:
        return dict(zip(self.keys, self.outs))

    def lookup(self, key) -> Term:
        out = self.index.get(key)
        if out is None:
            raise ModelError(f"argument {key!r} outside the table's domain")
        return out

    def __repr__(self) -> str:
        if self.dom == NAT:
            return "[" + " ".join(show_term(o) for o in self.outs) + "]"
        return "{" + ", ".join(f"{k!r}: {show_term(o)}" for k, o in zip(self.keys, self.outs)) + "}"


@dataclass
class FiniteModel:
    nat_bound: int = 3
    samples: int = 50
    seed: int = 0
    exhaustive_limit: int = 10 ** 4
    bindings: dict[str, Any] = field(default_factory=dict)
    defaults: dict[str, Any] = field(default_factory=dict)

    # value spaces ------------------------------------------------------------
    def count(self, ty: TypeExpr) -> int:
        """Number of values of ``ty``, saturating just above the enumeration limit."""
        cap = self.exhaustive_limit + 1
        if ty == BOOL:
            return 2
        if ty == NAT:
            return self.nat_bound + 1
        if ty == MARK:
            return 3
        if ty == EPS:
            return 1
        if isinstance(ty, Prod):
            return min(cap, self.count(ty.left) * self.count(ty.right))
        if isinstance(ty, Arrow):
            d, c = self.count(ty.dom), self.count(ty.cod)
            if d >= cap:
                return cap
            out = 1
            for _ in range(d):
                out *= c
                if out >= cap:
                    return cap
            return out
        if isinstance(ty, TypeVar):
            return 1
        raise ModelError(f"cannot enumerate values of {ty}")

    def exhaustive(self, ty: TypeExpr) -> bool:
        return self.count(ty) <= self.exhaustive_limit

    def rng(self, *salt) -> random.Random:
        return random.Random(":".join([str(self.seed), *map(str, salt)]))

    def key(self, t: Term, ty: TypeExpr):
        """Reified key of an enumerated value term (as produced below)."""
        return _term_key(t, ty, self.nat_bound)

    def table(self, dom: TypeExpr, cod: TypeExpr, outs: Iterable[Term]) -> Lit:
        doms = enumerate_values(dom, self)
        keys = tuple(self.key(d, dom) for d in doms)
        outs = tuple(outs)
        if len(outs) != len(keys):
            raise ModelError(f"table for {Arrow(dom, cod)} needs {len(keys)} entries")
        return Lit(FunValue(dom, cod, keys, outs, self.nat_bound), Arrow(dom, cod))

    # bindings ----------------------------------------------------------------
    def binding(self, name: str, ty: TypeExpr) -> Optional[Term]:
        if name in self.bindings:
            return self.from_json(self.bindings[name], ty)
        if name.startswith("default_") and name[8:] in self.defaults:
            return Lit(self.defaults[name[8:]], ty)
        return None

    def from_json(self, v: Any, ty: TypeExpr) -> Term:
        if isinstance(v, Term):
            return v
        if ty == BOOL:
            if v in (True, 1, "tt") and not isinstance(v, float):
                return TT
            if v in (False, 0, "ff") and not isinstance(v, float):
                return FF
            raise ModelError(f"not a boolean: {v!r}")
        if ty == NAT:
            if not isinstance(v, int) or v < 0:
                raise ModelError(f"not a natural number: {v!r}")
            return numeral(v)
        if ty == MARK:
            if v not in ("tt", "ff", "bot"):
                raise ModelError(f"not a marker: {v!r}")
            return {"tt": MTT, "ff": MFF, "bot": MBOT}[v]
        if isinstance(ty, Prod) and isinstance(v, list) and len(v) == 2:
            return Pair(self.from_json(v[0], ty.left), self.from_json(v[1], ty.right))
        if isinstance(ty, Arrow) and ty.dom == NAT and isinstance(v, list):
            vals = list(v) + [v[-1]] * max(0, self.nat_bound + 1 - len(v))
            return self.table(NAT, ty.cod, [self.from_json(x, ty.cod) for x in vals[: self.nat_bound + 1]])
        if isinstance(ty, Arrow) and isinstance(v, dict):
            doms = enumerate_values(ty.dom, self)
            outs = [self.from_json(v[_json_key(self.key(d, ty.dom))], ty.cod) for d in doms]
            return self.table(ty.dom, ty.cod, outs)
        raise ModelError(f"cannot read {v!r} as a value of {ty}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FiniteModel":
        return cls.from_dict(json.loads(Path(path).read_text()))

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteModel":
        known = {"nat_bound", "samples", "seed", "exhaustive_limit", "bindings", "defaults"}
        extra = set(data) - known
        bindings = dict(data.get("bindings", {}))
        for k in extra:
            if k.startswith("default_"):
                data.setdefault("defaults", {})[k[8:]] = data[k]
            else:
                bindings[k] = data[k]
        return cls(nat_bound=int(data.get("nat_bound", 3)), samples=int(data.get("samples", 50)),
                   seed=int(data.get("seed", 0)),
                   exhaustive_limit=int(data.get("exhaustive_limit", 10 ** 4)),
                   bindings=bindings, defaults=dict(data.get("defaults", {})))


def _json_key(k) -> str:
    return json.dumps(k)


def _term_key(t: Term, ty: TypeExpr, bound: int):
    if ty == BOOL:
        return t == TT
    if ty == NAT:
        from ..terms import numeral_value
        n = numeral_value(t)
        return min(n, bound)
    if ty == MARK:
        return {MTT: "mtt", MFF: "mff", MBOT: "mbot"}[t]
    if isinstance(ty, Prod):
        return (_term_key(t.left, ty.left, bound), _term_key(t.right, ty.right, bound))
    if isinstance(t, Lit) and isinstance(t.value, FunValue):
        f = t.value
        return tuple(_term_key(o, f.cod, bound) for o in f.outs)
    if isinstance(t, Lit):
        return t.value
    raise ModelError(f"no key for {t}")


_CACHE: dict = {}


def enumerate_values(ty: TypeExpr, model: FiniteModel) -> list[Term]:
    """All values of ``ty`` when there are at most ``exhaustive_limit``, else a seeded sample."""
    ck = (ty, model.nat_bound, model.samples, model.seed, model.exhaustive_limit)
    hit = _CACHE.get(ck)
    if hit is None:
        hit = _CACHE[ck] = _enumerate(ty, model)
    return hit


def _enumerate(ty: TypeExpr, model: FiniteModel) -> list[Term]:
    if ty == BOOL:
        return [TT, FF]
    if ty == NAT:
        return [numeral(i) for i in range(model.nat_bound + 1)]
    if ty == MARK:
        return [MTT, MFF, MBOT]
    if isinstance(ty, TypeVar):
        name = default_var_name(ty.name)
        return [Lit(model.defaults.get(ty.name, name), ty)]
    if isinstance(ty, Prod):
        ls, rs = enumerate_values(ty.left, model), enumerate_values(ty.right, model)
        if model.exhaustive(ty):
            return [Pair(a, b) for a, b in itertools.product(ls, rs)]
        rng = model.rng("prod", ty)
        return [Pair(rng.choice(ls), rng.choice(rs)) for _ in range(model.samples)]
    if isinstance(ty, Arrow):
        if not model.exhaustive(ty.dom):
            return _probing_functions(ty, model)
        dom_n = len(enumerate_values(ty.dom, model))
        cods = enumerate_values(ty.cod, model)
        if model.exhaustive(ty):
            return [model.table(ty.dom, ty.cod, outs)
                    for outs in itertools.product(cods, repeat=dom_n)]
        rng = model.rng("fun", ty)
        return [model.table(ty.dom, ty.cod, [rng.choice(cods) for _ in range(dom_n)])
                for _ in range(model.samples)]
    raise ModelError(f"cannot enumerate values of {ty}")


def _probes(x: Term, ty: TypeExpr, model: FiniteModel, rng: random.Random) -> Optional[Term]:
    """A random observation of ``x : ty`` with a tabulable result, if one exists."""
    if model.exhaustive(ty):
        return x
    if isinstance(ty, Prod):
        side = rng.choice(["l", "r"])
        if side == "l":
            return _probes(Fst(x), ty.left, model, rng) or _probes(Snd(x), ty.right, model, rng)
        return _probes(Snd(x), ty.right, model, rng) or _probes(Fst(x), ty.left, model, rng)
    if isinstance(ty, Arrow) and model.exhaustive(ty.dom):
        d = rng.choice(enumerate_values(ty.dom, model))
        return _probes(App(x, d), ty.cod, model, rng)
    return None


def _probing_functions(ty: Arrow, model: FiniteModel) -> list[Term]:
    """Seeded sample of functions whose domain is too large to tabulate.

    Half are constant; the rest observe their argument once and map the
    observation through a random table.
    """
    rng = model.rng("probe", ty)
    cods = enumerate_values(ty.cod, model)
    x = Var("arg%probe", ty.dom)
    out: list[Term] = []
    for i in range(model.samples):
        probe = _probes(x, ty.dom, model, rng) if i % 2 else None
        if probe is None:
            out.append(Lam(x.name, ty.dom, rng.choice(cods)))
            continue
        g = rng.choice(enumerate_values(Arrow(probe.ty, ty.cod), model))
        out.append(Lam(x.name, ty.dom, App(g, probe)))
    return out
