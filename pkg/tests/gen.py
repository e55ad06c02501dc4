"""Seeded random generators for types, well-typed terms and formulas."""
from __future__ import annotations

import random
from typing import Optional

from negarith.logic import Atom, Forall, Formula, Implies
from negarith.terms import (
    FF, MBOT, MEQ, MFF, MTT, SUCC, TT, App, Fst, Lam, Pair, Snd, Term, Var,
    if_const, mcase_const, numeral, rec_const, term_size,
)
from negarith.types import BOOL, EPS, MARK, NAT, Arrow, Prod, TypeExpr

BASE = [BOOL, NAT, MARK]


def random_type(rng: random.Random, depth: int = 2, eps: bool = False) -> TypeExpr:
    leaves = BASE + ([EPS] if eps else [])
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(leaves)
    left, right = random_type(rng, depth - 1, eps), random_type(rng, depth - 1, eps)
    return Arrow(left, right) if rng.random() < 0.5 else Prod(left, right)


class TermGen:
    """Well-typed terms over a small typed context.

    ``budget`` bounds the recursion roughly by node count; callers filter on
    the real size afterwards.
    """

    def __init__(self, rng: random.Random, free: Optional[dict] = None):
        self.rng = rng
        self.counter = 0
        self.free = dict(free or {})

    def fresh(self) -> str:
        self.counter += 1
        return f"x{self.counter}"

    def leaf(self, ty: TypeExpr, ctx: dict) -> Term:
        rng = self.rng
        vs = [Var(n, t) for n, t in ctx.items() if t == ty]
        if vs and rng.random() < 0.6:
            return rng.choice(vs)
        if ty == BOOL:
            return rng.choice([TT, FF])
        if ty == NAT:
            return numeral(rng.randrange(3))
        if ty == MARK:
            return rng.choice([MTT, MFF, MBOT])
        if isinstance(ty, Arrow):
            x = self.fresh()
            return Lam(x, ty.dom, self.leaf(ty.cod, {**ctx, x: ty.dom}))
        if isinstance(ty, Prod):
            return Pair(self.leaf(ty.left, ctx), self.leaf(ty.right, ctx))
        raise ValueError(ty)

    def term(self, ty: TypeExpr, ctx: dict, budget: int) -> Term:
        rng = self.rng
        if budget <= 1:
            return self.leaf(ty, ctx)
        b = budget - 1
        choice = rng.random()
        if isinstance(ty, Arrow) and choice < 0.5:
            x = self.fresh()
            return Lam(x, ty.dom, self.term(ty.cod, {**ctx, x: ty.dom}, b))
        if isinstance(ty, Prod) and choice < 0.4:
            return Pair(self.term(ty.left, ctx, b // 2), self.term(ty.right, ctx, b // 2))
        if ty == NAT and choice < 0.2:
            return App(SUCC, self.term(NAT, ctx, b))
        if ty == BOOL and choice < 0.15:
            return App(App(MEQ, self.term(MARK, ctx, b // 2)), self.term(MARK, ctx, b // 2))
        kind = rng.choice(["app", "app", "proj", "if", "rec", "mcase", "let", "leaf"])
        if kind == "app":
            sigma = random_type(rng, 1)
            f = self.term(Arrow(sigma, ty), ctx, b // 2)
            return App(f, self.term(sigma, ctx, b // 2))
        if kind == "proj":
            other = random_type(rng, 1)
            if rng.random() < 0.5:
                return Fst(self.term(Prod(ty, other), ctx, b))
            return Snd(self.term(Prod(other, ty), ctx, b))
        if kind == "if":
            c = self.term(BOOL, ctx, b // 3)
            return App(App(App(if_const(ty), c), self.term(ty, ctx, b // 3)),
                       self.term(ty, ctx, b // 3))
        if kind == "rec":
            n = numeral(rng.randrange(3)) if rng.random() < 0.7 else self.term(NAT, ctx, 3)
            k, p = self.fresh(), self.fresh()
            step = Lam(k, NAT, Lam(p, ty, self.term(ty, {**ctx, k: NAT, p: ty}, b // 2)))
            return App(App(App(rec_const(ty), n), self.term(ty, ctx, b // 3)), step)
        if kind == "mcase":
            m = self.term(MARK, ctx, b // 4)
            out: Term = App(mcase_const(ty), m)
            for _ in range(3):
                out = App(out, self.term(ty, ctx, b // 4))
            return out
        if kind == "let":
            sigma = random_type(rng, 1)
            x = self.fresh()
            val = self.term(sigma, ctx, b // 2)
            return App(Lam(x, sigma, self.term(ty, {**ctx, x: sigma}, b // 2)), val)
        return self.leaf(ty, ctx)


def random_terms(seed: int, count: int, max_size: int = 40, free: Optional[dict] = None):
    """``count`` well-typed terms of size at most ``max_size``."""
    rng = random.Random(seed)
    gen = TermGen(rng, free)
    out = []
    while len(out) < count:
        ty = random_type(rng, 2)
        t = gen.term(ty, dict(gen.free), rng.randrange(2, 24))
        if term_size(t) <= max_size:
            out.append(t)
    return out


def random_formula(rng: random.Random, depth: int, bound: Optional[dict] = None) -> Formula:
    """Formulas over atoms ``f t`` and ``meq`` tests, with ``f : nat => bool`` free."""
    bound = dict(bound or {})
    f = Var("f", Arrow(NAT, BOOL))
    nats = [Var(n, NAT) for n, t in bound.items() if t == NAT]
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        arg = rng.choice(nats) if nats and rng.random() < 0.7 else numeral(rng.randrange(3))
        if r < 0.5:
            return Atom(App(f, arg))
        if r < 0.75:
            return Atom(rng.choice([TT, FF]))
        return Atom(App(App(MEQ, rng.choice([MTT, MFF, MBOT])), rng.choice([MTT, MFF, MBOT])))
    if rng.random() < 0.6:
        return Implies(random_formula(rng, depth - 1, bound), random_formula(rng, depth - 1, bound))
    x = f"n{len(bound)}"
    return Forall(x, NAT, random_formula(rng, depth - 1, {**bound, x: NAT}))


def eps_term(rng, ty, depth):
    """A random term of ``ty`` built from variables, pairs, projections and applications."""
    if depth == 0 or rng.random() < 0.3:
        return Var(f"v{rng.randrange(4)}", ty)
    r = rng.random()
    if isinstance(ty, Prod) and r < 0.4:
        return Pair(eps_term(rng, ty.left, depth - 1), eps_term(rng, ty.right, depth - 1))
    if isinstance(ty, Arrow) and r < 0.6:
        return Lam(f"b{depth}", ty.dom, eps_term(rng, ty.cod, depth - 1))
    other = random_type(rng, 1, eps=True)
    if r < 0.8:
        return App(eps_term(rng, Arrow(other, ty), depth - 1), eps_term(rng, other, depth - 1))
    if rng.random() < 0.5:
        return Fst(eps_term(rng, Prod(ty, other), depth - 1))
    return Snd(eps_term(rng, Prod(other, ty), depth - 1))
