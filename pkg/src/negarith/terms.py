"""Terms of Goedel's T with pairs and a marker type.

Variables carry their type, and the polymorphic constants (``if``, ``rec``,
``mcase``) carry the type parameter they are used at, so every well-formed
term synthesizes its type bottom-up without a context.
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterator, Mapping, Optional

from .types import (
    BOOL, EPS, MARK, NAT, Arrow, HoleType, Prod, TypeExpr, TypeVar, arrows, simplify_type,
)


class KernelError(Exception):
    pass


class UnboundVariable(KernelError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class TypeMismatch(KernelError):
    def __init__(self, location: str, expected: Any, found: Any):
        super().__init__(f"type mismatch at {location}: expected {expected}, found {found}")
        self.location = location
        self.expected = expected
        self.found = found


class FuelExhausted(KernelError):
    pass


# --------------------------------------------------------------------------
# syntax

class Term:
    """Base class of all term nodes."""

    @cached_property
    def ty(self) -> TypeExpr:
        return _synth(self)

    @cached_property
    def fv(self) -> frozenset:
        return _free_vars(self)

    def __str__(self) -> str:
        from .sexpr import show_term
        return show_term(self)


@dataclass(frozen=True, eq=True, repr=True)
class Var(Term):
    name: str
    vtype: TypeExpr


@dataclass(frozen=True)
class Lam(Term):
    name: str
    vtype: TypeExpr
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Fst(Term):
    arg: Term


@dataclass(frozen=True)
class Snd(Term):
    arg: Term


CONST_NAMES = ("tt", "ff", "zero", "succ", "if", "rec", "mtt", "mff", "mbot", "mcase", "meq")
POLY_CONSTS = ("if", "rec", "mcase")


@dataclass(frozen=True)
class Const(Term):
    name: str
    sigma: Optional[TypeExpr] = None

    def __post_init__(self):
        if self.name not in CONST_NAMES:
            raise KernelError(f"unknown constant {self.name!r}")
        if (self.name in POLY_CONSTS) != (self.sigma is not None):
            raise KernelError(f"constant {self.name!r}: bad type parameter {self.sigma}")


@dataclass(frozen=True)
class Check(Term):
    """Transparent tag marking a counterexample check; the evaluator counts it."""
    label: str
    body: Term


@dataclass(frozen=True)
class Lit(Term):
    """Opaque semantic value (model function tables, enumerated inhabitants)."""
    value: Any
    ltype: TypeExpr


@dataclass(frozen=True)
class EpsTerm(Term):
    pass


TermExpr = Term

TT = Const("tt")
FF = Const("ff")
ZERO = Const("zero")
SUCC = Const("succ")
MTT = Const("mtt")
MFF = Const("mff")
MBOT = Const("mbot")
MEQ = Const("meq")
EPS_T = EpsTerm()


def if_const(sigma: TypeExpr) -> Const:
    return Const("if", sigma)


def rec_const(sigma: TypeExpr) -> Const:
    return Const("rec", sigma)


def mcase_const(sigma: TypeExpr) -> Const:
    return Const("mcase", sigma)


def const_type(c: Const) -> TypeExpr:
    n, s = c.name, c.sigma
    if n in ("tt", "ff"):
        return BOOL
    if n == "zero":
        return NAT
    if n == "succ":
        return Arrow(NAT, NAT)
    if n in ("mtt", "mff", "mbot"):
        return MARK
    if n == "meq":
        return arrows(MARK, MARK, BOOL)
    if n == "if":
        return arrows(BOOL, s, s, s)
    if n == "rec":
        return arrows(NAT, s, arrows(NAT, s, s), s)
    if n == "mcase":
        return arrows(MARK, s, s, s, s)
    raise KernelError(n)


def _synth(t: Term) -> TypeExpr:
    if isinstance(t, Var):
        return t.vtype
    if isinstance(t, Lam):
        return Arrow(t.vtype, t.body.ty)
    if isinstance(t, App):
        f = t.fn.ty
        if not isinstance(f, Arrow):
            raise TypeMismatch("application", "an arrow type", f)
        return f.cod
    if isinstance(t, Pair):
        return Prod(t.left.ty, t.right.ty)
    if isinstance(t, (Fst, Snd)):
        p = t.arg.ty
        if not isinstance(p, Prod):
            raise TypeMismatch("projection", "a product type", p)
        return p.left if isinstance(t, Fst) else p.right
    if isinstance(t, Const):
        return const_type(t)
    if isinstance(t, Check):
        return t.body.ty
    if isinstance(t, Lit):
        return t.ltype
    if isinstance(t, EpsTerm):
        return EPS
    raise KernelError(f"not a term: {t!r}")


def _free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return t.body.fv - {t.name}
    if isinstance(t, (App, Pair)):
        a, b = (t.fn, t.arg) if isinstance(t, App) else (t.left, t.right)
        return a.fv | b.fv
    if isinstance(t, (Fst, Snd)):
        return t.arg.fv
    if isinstance(t, Check):
        return t.body.fv
    return frozenset()


def free_var_types(t: Term) -> dict[str, TypeExpr]:
    out: dict[str, TypeExpr] = {}

    def go(u: Term, bound: frozenset):
        if isinstance(u, Var):
            if u.name not in bound:
                out.setdefault(u.name, u.vtype)
        elif isinstance(u, Lam):
            go(u.body, bound | {u.name})
        else:
            for c in children(u):
                go(c, bound)

    go(t, frozenset())
    return out


def children(t: Term) -> tuple:
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, (Fst, Snd)):
        return (t.arg,)
    if isinstance(t, Check):
        return (t.body,)
    return ()


# --------------------------------------------------------------------------
# typing

def infer_type(t: Term, ctx: Optional[Mapping[str, TypeExpr]] = None) -> TypeExpr:
    """Check ``t`` and return its type.

    With ``ctx`` given, every free variable must be declared there with the
    type its occurrences carry; without it free variables are trusted.
    """

    def go(u: Term, env: dict, where: str) -> TypeExpr:
        if isinstance(u, Var):
            if u.name in env:
                declared = env[u.name]
            elif ctx is not None:
                if u.name not in ctx:
                    raise UnboundVariable(u.name)
                declared = ctx[u.name]
            else:
                return u.vtype
            if declared != u.vtype:
                raise TypeMismatch(f"{where}/var {u.name}", declared, u.vtype)
            return u.vtype
        if isinstance(u, Lam):
            inner = dict(env)
            inner[u.name] = u.vtype
            return Arrow(u.vtype, go(u.body, inner, where + "/lam"))
        if isinstance(u, App):
            f = go(u.fn, env, where + "/fn")
            a = go(u.arg, env, where + "/arg")
            if not isinstance(f, Arrow):
                raise TypeMismatch(where + "/app", "an arrow type", f)
            if f.dom != a:
                raise TypeMismatch(where + "/app", f.dom, a)
            return f.cod
        if isinstance(u, Pair):
            return Prod(go(u.left, env, where + "/l"), go(u.right, env, where + "/r"))
        if isinstance(u, (Fst, Snd)):
            p = go(u.arg, env, where + "/proj")
            if not isinstance(p, Prod):
                raise TypeMismatch(where + "/proj", "a product type", p)
            return p.left if isinstance(u, Fst) else p.right
        if isinstance(u, Check):
            return go(u.body, env, where + "/check")
        if isinstance(u, EpsTerm):
            return EPS
        return u.ty

    return go(t, {}, "")


# --------------------------------------------------------------------------
# names and substitution

_fresh_counter = itertools.count()
_fresh_sep = "%"


def fresh_name(base: str = "v") -> str:
    base = base.split("%")[0].split("#")[0]
    return f"{base}{_fresh_sep}{next(_fresh_counter)}"


@contextmanager
def fresh_scope():
    """Deterministic names for one run: ``base#1``, ``base#2``, ...

    The separator differs from the global one, so names made inside a scope
    never clash with names made outside it.
    """
    global _fresh_counter, _fresh_sep
    if _fresh_sep == "#":
        yield
        return
    saved = _fresh_counter, _fresh_sep
    _fresh_counter, _fresh_sep = itertools.count(1), "#"
    try:
        yield
    finally:
        _fresh_counter, _fresh_sep = saved


def rename_bound(lam: Lam, avoid: frozenset) -> Lam:
    new = fresh_name(lam.name)
    while new in avoid:
        new = fresh_name(lam.name)
    return Lam(new, lam.vtype, subst(lam.body, lam.name, Var(new, lam.vtype)))


def subst(t: Term, x: str, s: Term) -> Term:
    """Capture-free substitution ``t[x := s]``."""
    return subst_many(t, {x: s})


def subst_many(t: Term, sigma: Mapping[str, Term]) -> Term:
    if not sigma:
        return t
    live = {k: v for k, v in sigma.items() if k in t.fv}
    if not live:
        return t
    incoming = frozenset().union(*(v.fv for v in live.values()))
    return _subst(t, live, incoming)


def _subst(t: Term, sigma: Mapping[str, Term], incoming: frozenset) -> Term:
    if not (t.fv & sigma.keys()):
        return t
    if isinstance(t, Var):
        return sigma[t.name]
    if isinstance(t, Lam):
        inner = {k: v for k, v in sigma.items() if k != t.name}
        if not inner:
            return t
        if t.name in incoming:
            t = rename_bound(t, incoming | t.body.fv)
        return Lam(t.name, t.vtype, _subst(t.body, inner, incoming))
    if isinstance(t, App):
        return App(_subst(t.fn, sigma, incoming), _subst(t.arg, sigma, incoming))
    if isinstance(t, Pair):
        return Pair(_subst(t.left, sigma, incoming), _subst(t.right, sigma, incoming))
    if isinstance(t, Fst):
        return Fst(_subst(t.arg, sigma, incoming))
    if isinstance(t, Snd):
        return Snd(_subst(t.arg, sigma, incoming))
    if isinstance(t, Check):
        return Check(t.label, _subst(t.body, sigma, incoming))
    return t


def subst_type_var(t: Term, name: str, ty: TypeExpr) -> Term:
    """Instantiate a type variable (or the hole type when ``name`` is None)."""

    def st(a: TypeExpr) -> TypeExpr:
        if isinstance(a, TypeVar) and a.name == name:
            return ty
        if name is None and isinstance(a, HoleType):
            return ty
        if isinstance(a, Arrow):
            return Arrow(st(a.dom), st(a.cod))
        if isinstance(a, Prod):
            return Prod(st(a.left), st(a.right))
        return a

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            return Var(u.name, st(u.vtype))
        if isinstance(u, Lam):
            return Lam(u.name, st(u.vtype), go(u.body))
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg))
        if isinstance(u, Pair):
            return Pair(go(u.left), go(u.right))
        if isinstance(u, Fst):
            return Fst(go(u.arg))
        if isinstance(u, Snd):
            return Snd(go(u.arg))
        if isinstance(u, Check):
            return Check(u.label, go(u.body))
        if isinstance(u, Const) and u.sigma is not None:
            return Const(u.name, st(u.sigma))
        if isinstance(u, Lit):
            return Lit(u.value, st(u.ltype))
        return u

    return go(t)


# --------------------------------------------------------------------------
# helpers for building terms

def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = App(SUCC, t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, App) and t.fn == SUCC:
        n += 1
        t = t.arg
    return n if t == ZERO else None


def let(name: str, value: Term, body: Term) -> Term:
    """``let x := value in body`` as the beta-redex ``(lam x body) value``."""
    return App(Lam(name, value.ty, body), value)


def if_then_else(b: Term, s: Term, t: Term) -> Term:
    return apps(if_const(s.ty), b, s, t)


def rec(n: Term, base: Term, step: Term) -> Term:
    return apps(rec_const(base.ty), n, base, step)


def mark_eq(a: Term, b: Term) -> Term:
    return apps(MEQ, a, b)


def spine(t: Term) -> tuple[Term, list]:
    """Split ``t`` into a head and a list of eliminations.

    Eliminations are ``("app", arg)``, ``("fst",)`` or ``("snd",)``, listed
    from the innermost outwards.
    """
    elims: list = []
    while True:
        if isinstance(t, App):
            elims.append(("app", t.arg))
            t = t.fn
        elif isinstance(t, Fst):
            elims.append(("fst",))
            t = t.arg
        elif isinstance(t, Snd):
            elims.append(("snd",))
            t = t.arg
        else:
            break
    elims.reverse()
    return t, elims


def unspine(head: Term, elims: list) -> Term:
    for e in elims:
        if e[0] == "app":
            head = App(head, e[1])
        elif e[0] == "fst":
            head = Fst(head)
        else:
            head = Snd(head)
    return head


# --------------------------------------------------------------------------
# reduction

_ARITY = {"if": 3, "rec": 3, "mcase": 4, "meq": 2}
_MARKS = ("mtt", "mff", "mbot")


def _contract_head(head: Term, elims: list) -> Optional[tuple[Term, int]]:
    """Contract a root redex; returns (reduct, number of elims consumed)."""
    if not elims:
        if isinstance(head, Check):
            return head.body, 0
        return None
    e0 = elims[0]
    if isinstance(head, Lam) and e0[0] == "app":
        return subst(head.body, head.name, e0[1]), 1
    if isinstance(head, Pair) and e0[0] in ("fst", "snd"):
        return (head.left if e0[0] == "fst" else head.right), 1
    if isinstance(head, Check):
        return head.body, 0
    if isinstance(head, Const) and head.name in _ARITY:
        k = _ARITY[head.name]
        if len(elims) < k or any(e[0] != "app" for e in elims[:k]):
            return None
        args = [e[1] for e in elims[:k]]
        if head.name == "if":
            if args[0] == TT:
                return args[1], k
            if args[0] == FF:
                return args[2], k
            return None
        if head.name == "rec":
            n = args[0]
            if n == ZERO:
                return args[1], k
            if isinstance(n, App) and n.fn == SUCC:
                return apps(args[2], n.arg, apps(head, n.arg, args[1], args[2])), k
            return None
        if head.name == "mcase":
            m = args[0]
            if isinstance(m, Const) and m.name in _MARKS:
                return args[1 + _MARKS.index(m.name)], k
            return None
        if head.name == "meq":
            a, b = args
            if isinstance(a, Const) and isinstance(b, Const) and a.name in _MARKS and b.name in _MARKS:
                return (TT if a.name == b.name else FF), k
            return None
    return None


def reduce_step(t: Term) -> Optional[Term]:
    """One leftmost-outermost contraction, or None when ``t`` is normal."""
    head, elims = spine(t)
    r = _contract_head(head, elims)
    if r is not None:
        reduct, used = r
        return unspine(reduct, elims[used:])
    # no root redex: leftmost inside the head, then the arguments in order
    inner = _step_inside(head)
    if inner is not None:
        return unspine(inner, elims)
    for i, e in enumerate(elims):
        if e[0] == "app":
            s = reduce_step(e[1])
            if s is not None:
                new = list(elims)
                new[i] = ("app", s)
                return unspine(head, new)
    return None


def _step_inside(head: Term) -> Optional[Term]:
    if isinstance(head, Lam):
        b = reduce_step(head.body)
        return None if b is None else Lam(head.name, head.vtype, b)
    if isinstance(head, Pair):
        a = reduce_step(head.left)
        if a is not None:
            return Pair(a, head.right)
        b = reduce_step(head.right)
        return None if b is None else Pair(head.left, b)
    return None


def reduce_step_innermost(t: Term) -> Optional[Term]:
    """One rightmost-innermost contraction (used to cross-check confluence)."""
    head, elims = spine(t)
    for i in range(len(elims) - 1, -1, -1):
        e = elims[i]
        if e[0] == "app":
            s = reduce_step_innermost(e[1])
            if s is not None:
                new = list(elims)
                new[i] = ("app", s)
                return unspine(head, new)
    if isinstance(head, Lam):
        b = reduce_step_innermost(head.body)
        if b is not None:
            return unspine(Lam(head.name, head.vtype, b), elims)
    elif isinstance(head, Pair):
        b = reduce_step_innermost(head.right)
        if b is not None:
            return unspine(Pair(head.left, b), elims)
        a = reduce_step_innermost(head.left)
        if a is not None:
            return unspine(Pair(a, head.right), elims)
    elif isinstance(head, Check):
        return unspine(head.body, elims)
    # innermost redex is now the root of some prefix of the spine
    for k in range(1, len(elims) + 1):
        r = _contract_head(head, elims[:k])
        if r is not None and r[1] == k:
            return unspine(r[0], elims[k:])
    return None


def normalize_by_steps(t: Term, fuel: int = 10 ** 6, innermost: bool = False) -> Term:
    step = reduce_step_innermost if innermost else reduce_step
    for _ in range(fuel):
        s = step(t)
        if s is None:
            return t
        t = s
    raise FuelExhausted(f"no normal form within {fuel} steps")


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("normalization fuel exhausted")


def whnf(t: Term, fuel: Optional[_Fuel] = None) -> Term:
    fuel = fuel or _Fuel(10 ** 6)
    while True:
        head, elims = spine(t)
        if isinstance(head, Const) and head.name in _ARITY:
            k = _ARITY[head.name]
            if len(elims) >= k and all(e[0] == "app" for e in elims[:k]):
                principal = whnf(elims[0][1], fuel)
                elims = list(elims)
                elims[0] = ("app", principal)
                if head.name == "meq":
                    elims[1] = ("app", whnf(elims[1][1], fuel))
        r = _contract_head(head, elims)
        if r is None:
            return unspine(head, elims)
        fuel.spend()
        t = unspine(r[0], elims[r[1]:])


def normalize(t: Term, fuel: int = 10 ** 6) -> Term:
    """Normal form by normal-order reduction (same result as iterating reduce_step)."""
    f = _Fuel(fuel)

    def go(u: Term) -> Term:
        u = whnf(u, f)
        head, elims = spine(u)
        if isinstance(head, Lam):
            head = Lam(head.name, head.vtype, go(head.body))
        elif isinstance(head, Pair):
            head = Pair(go(head.left), go(head.right))
        new = [("app", go(e[1])) if e[0] == "app" else e for e in elims]
        return unspine(head, new)

    return go(t)


# --------------------------------------------------------------------------
# eta-long forms, alpha-equivalence, r-equality

def eta_long(t: Term, ty: Optional[TypeExpr] = None) -> Term:
    """Fully eta-expand a normal term of type ``ty``."""
    ty = t.ty if ty is None else ty
    if isinstance(ty, Arrow):
        if isinstance(t, Lam):
            return Lam(t.name, t.vtype, eta_long(t.body, ty.cod))
        x = fresh_name("e")
        return Lam(x, ty.dom, eta_long(App(t, eta_long(Var(x, ty.dom), ty.dom)), ty.cod))
    if isinstance(ty, Prod):
        if isinstance(t, Pair):
            return Pair(eta_long(t.left, ty.left), eta_long(t.right, ty.right))
        return Pair(eta_long(Fst(t), ty.left), eta_long(Snd(t), ty.right))
    head, elims = spine(t)
    cur = head.ty
    if isinstance(head, Lam):
        head = eta_long(head, cur)
    elif isinstance(head, Pair):
        head = eta_long(head, cur)
    new = []
    for e in elims:
        if e[0] == "app":
            new.append(("app", eta_long(e[1], cur.dom)))
            cur = cur.cod
        else:
            new.append(e)
            cur = cur.left if e[0] == "fst" else cur.right
    return unspine(head, new)


def alpha_eq(s: Term, t: Term) -> bool:
    def go(a: Term, b: Term, ea: dict, eb: dict, depth: int) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Var):
            ia, ib = ea.get(a.name), eb.get(b.name)
            if ia is None and ib is None:
                return a.name == b.name and a.vtype == b.vtype
            return ia == ib
        if isinstance(a, Lam):
            if a.vtype != b.vtype:
                return False
            na, nb = dict(ea), dict(eb)
            na[a.name] = depth
            nb[b.name] = depth
            return go(a.body, b.body, na, nb, depth + 1)
        if isinstance(a, Check):
            return go(a.body, b.body, ea, eb, depth)
        ca, cb = children(a), children(b)
        if not ca:
            return a == b
        return all(go(x, y, ea, eb, depth) for x, y in zip(ca, cb))

    return go(s, t, {}, {}, 0)


def r_equal(s: Term, t: Term) -> bool:
    """Equality of eta-long normal forms."""
    if s.ty != t.ty:
        return False
    if alpha_eq(s, t):
        return True
    ty = s.ty
    return alpha_eq(eta_long(normalize(s), ty), eta_long(normalize(t), ty))


# --------------------------------------------------------------------------
# nulltype simplification

def epsilon_simplify_type(ty: TypeExpr) -> TypeExpr:
    return simplify_type(ty)


def epsilon_simplify_term(t: Term) -> Term:
    """Exhaustively erase nulltype parts of ``t``."""
    if simplify_type(t.ty) == EPS:
        return EPS_T
    if isinstance(t, Var):
        return Var(t.name, simplify_type(t.vtype))
    if isinstance(t, Lam):
        body = epsilon_simplify_term(t.body)
        if simplify_type(t.vtype) == EPS:
            return body
        return Lam(t.name, simplify_type(t.vtype), body)
    if isinstance(t, App):
        f = epsilon_simplify_term(t.fn)
        a = epsilon_simplify_term(t.arg)
        if isinstance(a, EpsTerm):
            return f
        return App(f, a)
    if isinstance(t, Pair):
        a = epsilon_simplify_term(t.left)
        b = epsilon_simplify_term(t.right)
        if isinstance(a, EpsTerm):
            return b
        if isinstance(b, EpsTerm):
            return a
        return Pair(a, b)
    if isinstance(t, (Fst, Snd)):
        p = t.arg.ty
        inner = epsilon_simplify_term(t.arg)
        other = p.right if isinstance(t, Fst) else p.left
        if simplify_type(other) == EPS:
            return inner
        return type(t)(inner)
    if isinstance(t, Check):
        return Check(t.label, epsilon_simplify_term(t.body))
    if isinstance(t, Const) and t.sigma is not None:
        return Const(t.name, simplify_type(t.sigma))
    if isinstance(t, Lit):
        return Lit(t.value, simplify_type(t.ltype))
    return t


# smart constructors used by extraction; they assume simplified argument types

def mk_app(f: Term, a: Term) -> Term:
    if isinstance(f, EpsTerm):
        return EPS_T
    if isinstance(a, EpsTerm):
        return f
    return App(f, a)


def mk_lam(name: str, vtype: TypeExpr, body: Term) -> Term:
    if isinstance(body, EpsTerm):
        return EPS_T
    if vtype == EPS:
        return body
    return Lam(name, vtype, body)


def mk_pair(a: Term, b: Term) -> Term:
    if isinstance(a, EpsTerm):
        return b
    if isinstance(b, EpsTerm):
        return a
    return Pair(a, b)


def mk_fst(t: Term, left: TypeExpr, right: TypeExpr) -> Term:
    """Left projection of ``t : left x right`` (logical component types)."""
    if left == EPS:
        return EPS_T
    if right == EPS:
        return t
    if isinstance(t, Pair):
        return t.left
    return Fst(t)


def mk_snd(t: Term, left: TypeExpr, right: TypeExpr) -> Term:
    if right == EPS:
        return EPS_T
    if left == EPS:
        return t
    if isinstance(t, Pair):
        return t.right
    return Snd(t)


def mk_let(name: str, value: Term, body: Term) -> Term:
    if isinstance(value, EpsTerm):
        return body
    if name not in body.fv:
        return body
    return App(Lam(name, value.ty, body), value)


def mk_var(name: str, vtype: TypeExpr) -> Term:
    return EPS_T if vtype == EPS else Var(name, vtype)


# --------------------------------------------------------------------------
# metrics and inhabitants

def term_size(t: Term) -> int:
    """Node count; nulltype nodes and check tags are free."""
    if isinstance(t, EpsTerm):
        return 0
    if isinstance(t, Check):
        return term_size(t.body)
    return 1 + sum(term_size(c) for c in children(t))


def default_var_name(alpha: str) -> str:
    return f"default_{alpha}"


def canonical_inhabitant(ty: TypeExpr) -> Term:
    if ty == BOOL:
        return FF
    if ty == NAT:
        return ZERO
    if ty == MARK:
        return MBOT
    if isinstance(ty, Prod):
        return Pair(canonical_inhabitant(ty.left), canonical_inhabitant(ty.right))
    if isinstance(ty, Arrow):
        return Lam(fresh_name("c"), ty.dom, canonical_inhabitant(ty.cod))
    if isinstance(ty, TypeVar):
        return Var(default_var_name(ty.name), ty)
    if ty == EPS:
        return EPS_T
    raise KernelError(f"no canonical inhabitant for {ty}")


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        stack.extend(children(u))
