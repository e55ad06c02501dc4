"""Computational types, the quantifier-free translation and definition contexts.

Two type assignments are supported. ``marked=False`` is the uncurried
quasi-linear assignment; ``marked=True`` tags the counterexample returned by
an implication with a three-valued marker. Terms built here pass the
*logical* (pre-simplification) component types to the projection helpers,
since a nulltype component has already been erased from the term itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .logic import Atom, Forall, Formula, Implies, subst_formula
from .terms import (
    EPS_T, TT, App, Check, Lam, Pair, Term, TypeMismatch, Var, fresh_name,
    if_then_else, mk_app, mk_fst, mk_lam, mk_snd, mk_var,
)
from .types import BOOL, EPS, HOLE, MARK, Arrow, Prod, TypeExpr, arrow, prod


@dataclass(frozen=True)
class CompTypes:
    plus: TypeExpr
    minus: TypeExpr
    star: TypeExpr
    marked: Optional[TypeExpr]
    variant: str  # "plain" | "marked"

    @property
    def negative(self) -> TypeExpr:
        """Type of a counterexample for an assumption of this formula."""
        return self.marked if self.variant == "marked" else self.minus


@lru_cache(maxsize=None)
def tau(a: Formula, marked: bool = False) -> CompTypes:
    """Positive, negative, realizer and marked types of ``a``."""
    variant = "marked" if marked else "plain"
    if isinstance(a, Atom):
        plus, minus = EPS, EPS
    elif isinstance(a, Implies):
        ta, tb = tau(a.left, marked), tau(a.right, marked)
        plus = prod(tb.plus, ta.negative)
        minus = prod(ta.star, tb.minus)
    else:
        tb = tau(a.body, marked)
        plus = tb.plus
        minus = prod(a.vtype, tb.minus)
    return CompTypes(plus, minus, arrow(minus, plus),
                     prod(MARK, minus) if marked else None, variant)


# --------------------------------------------------------------------------
# uncurried application and extended projections

def papply(f: Term, left: TypeExpr, right: TypeExpr, t: Term) -> Term:
    """Partial application of ``f : left x right => tau`` to ``t : left``."""
    if right == EPS:
        return mk_app(f, t)
    if left == EPS:
        return f
    x = fresh_name("pa")
    return Lam(x, right, mk_app(f, Pair(t, Var(x, right))))


def partial_apply(f: Term, t: Term) -> Term:
    """``f (.) t``: plain application, or currying off the first component."""
    fty = f.ty
    if not isinstance(fty, Arrow):
        raise TypeMismatch("partial application", "an arrow type", fty)
    if fty.dom == t.ty:
        return App(f, t)
    if isinstance(fty.dom, Prod) and fty.dom.left == t.ty:
        return papply(f, fty.dom.left, fty.dom.right, t)
    raise TypeMismatch("partial application", fty.dom, t.ty)


def proj_fun_logical(f: Term, dom: TypeExpr, left: TypeExpr, right: TypeExpr, side: str) -> Term:
    """Extended projection of ``f : dom => left x right``."""
    proj = mk_fst if side == "fst" else mk_snd
    if dom == EPS:
        return proj(f, left, right)
    if isinstance(f, Lam):
        return mk_lam(f.name, f.vtype, proj(f.body, left, right))
    x = fresh_name("pr")
    return mk_lam(x, dom, proj(App(f, Var(x, dom)), left, right))


def proj_fun(f: Term, side: str) -> Term:
    fty = f.ty
    if not (isinstance(fty, Arrow) and isinstance(fty.cod, Prod)):
        raise TypeMismatch("extended projection", "a function into a product", fty)
    return proj_fun_logical(f, fty.dom, fty.cod.left, fty.cod.right, side)


# --------------------------------------------------------------------------
# translation and characteristic terms

def _imp_parts(a: Implies, r: Term, s: Term, marked: bool):
    """Realizer/challenge pairs for the premise and conclusion of ``a``."""
    ta, tb = tau(a.left, marked), tau(a.right, marked)
    t = tau(a, marked)
    s_left = mk_fst(s, ta.star, tb.minus)
    s_right = mk_snd(s, ta.star, tb.minus)
    rs = mk_app(r, s) if t.minus != EPS else r
    challenge = mk_snd(rs, tb.plus, ta.negative)
    if marked:
        challenge = mk_snd(challenge, MARK, ta.minus)
    partial = papply(r, ta.star, tb.minus, s_left)
    r_right = proj_fun_logical(partial, tb.minus, tb.plus, ta.negative, "fst")
    return (s_left, challenge), (r_right, s_right)


def _all_parts(a: Forall, r: Term, s: Term, marked: bool):
    tb = tau(a.body, marked)
    head = mk_fst(s, a.vtype, tb.minus)
    return subst_formula(a.body, a.var, head), papply(r, a.vtype, tb.minus, head), \
        mk_snd(s, a.vtype, tb.minus)


def _check_types(a: Formula, r: Term, s: Term, marked: bool) -> None:
    t = tau(a, marked)
    if r.ty != t.star and not (t.star == EPS and r == EPS_T):
        raise TypeMismatch("realizer", t.star, r.ty)
    if s.ty != t.minus and not (t.minus == EPS and s == EPS_T):
        raise TypeMismatch("challenge", t.minus, s.ty)


def translate(a: Formula, r: Term, s: Term, marked: bool = False, check: bool = True) -> Formula:
    """The quantifier-free formula ``|A|^r_s``."""
    if check:
        _check_types(a, r, s, marked)
    if isinstance(a, Atom):
        return a
    if isinstance(a, Forall):
        body, r2, s2 = _all_parts(a, r, s, marked)
        return translate(body, r2, s2, marked, False)
    (r1, s1), (r2, s2) = _imp_parts(a, r, s, marked)
    return Implies(translate(a.left, r1, s1, marked, False),
                   translate(a.right, r2, s2, marked, False))


def impb(p: Term, q: Term) -> Term:
    """Boolean implication ``if p then q else tt``."""
    if p == TT:
        return q
    if q == TT:
        return TT
    return if_then_else(p, q, TT)


def char_body(a: Formula, r: Term, s: Term, marked: bool = False) -> Term:
    """Boolean term deciding ``|A|^r_s``."""
    if isinstance(a, Atom):
        return a.term
    if isinstance(a, Forall):
        body, r2, s2 = _all_parts(a, r, s, marked)
        return char_body(body, r2, s2, marked)
    (r1, s1), (r2, s2) = _imp_parts(a, r, s, marked)
    return impb(char_body(a.left, r1, s1, marked), char_body(a.right, r2, s2, marked))


def characteristic_term(c: Formula, marked: bool = False) -> Term:
    """``T_C : tau*(C) => tau-(C) => bool`` with ``at(T_C x y)`` deciding ``|C|^x_y``."""
    t = tau(c, marked)
    x = mk_var(fresh_name("tx"), t.star)
    y = mk_var(fresh_name("ty"), t.minus)
    body = char_body(c, x, y, marked)
    out = body
    if t.minus != EPS:
        out = Lam(y.name, t.minus, out)
    if t.star != EPS:
        out = Lam(x.name, t.star, out)
    return out


def tc_check(c: Formula, r: Term, s: Term, marked: bool = False, label: str = "C") -> Term:
    """Tagged application ``T_C r s``; the evaluator counts each forcing."""
    return Check(label, mk_app(mk_app(characteristic_term(c, marked), r), s))


def t_or() -> Term:
    """Lazy boolean or: ``lam x y. if x then tt else y``."""
    x, y = fresh_name("x"), fresh_name("y")
    return Lam(x, BOOL, Lam(y, BOOL, if_then_else(Var(x, BOOL), TT, Var(y, BOOL))))


def lazy_or(p: Term, q: Term) -> Term:
    """``T_or p q`` with the redex already contracted."""
    return if_then_else(p, TT, q)


# --------------------------------------------------------------------------
# definition contexts

@dataclass(frozen=True)
class DefContext:
    """A term with one hole, kept as a spine of frames (outermost first).

    A frame is ``("lam", name, type)`` for an abstraction over the hole or
    ``("arg", term)`` for an application of the hole's surrounding context.
    Plugging lets the plugged term's free variables be captured by the
    abstractions of the context.
    """
    frames: tuple = ()

    @property
    def binders(self) -> list[str]:
        return [f[1] for f in self.frames if f[0] == "lam"]

    def skeleton(self) -> Term:
        return plug(self, Var("<>", HOLE))

    def size(self) -> int:
        from .terms import term_size
        return sum(1 + (term_size(f[1]) if f[0] == "arg" else 0) for f in self.frames)


IDENTITY = DefContext(())


def lam_frame(name: str, ty: TypeExpr) -> tuple:
    return ("lam", name, ty)


def let_frames(name: str, value: Term) -> tuple:
    """Frames for ``let name := value in <>``."""
    if value == EPS_T:
        return ()
    return (("arg", value), ("lam", name, value.ty))


def plug(e: DefContext, t: Term) -> Term:
    out = t
    for f in reversed(e.frames):
        if f[0] == "lam":
            out = out if f[2] == EPS else mk_lam(f[1], f[2], out)
        else:
            out = mk_app(out, f[1])
    return out


def compose_contexts(e1: DefContext, e2: DefContext) -> DefContext:
    """``plug(compose(e1, e2), t) == plug(e1, plug(e2, t))``."""
    return DefContext(e1.frames + e2.frames)


def context(*parts) -> DefContext:
    frames: list = []
    for p in parts:
        frames.extend(p.frames if isinstance(p, DefContext) else p)
    return DefContext(tuple(frames))
