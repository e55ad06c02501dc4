"""Formulas of the negative fragment, natural-deduction proof terms and the checker."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional

from .terms import (
    FF, TT, ZERO, SUCC, App, KernelError, Term, Var, fresh_name, infer_type, r_equal,
    subst, term_size,
)
from .types import BOOL, NAT, TypeExpr


class ProofError(Exception):
    pass


class AssumptionTypeClash(ProofError):
    pass


class EigenvariableViolation(ProofError):
    pass


class ConclusionMismatch(ProofError):
    def __init__(self, expected, found, path: str):
        super().__init__(f"at {path or '<root>'}: expected {expected}, found {found}")
        self.expected = expected
        self.found = found
        self.path = path


class IllTypedEmbeddedTerm(ProofError):
    pass


# --------------------------------------------------------------------------
# formulas

class Formula:
    @cached_property
    def fv(self) -> frozenset:
        if isinstance(self, Atom):
            return self.term.fv
        if isinstance(self, Implies):
            return self.left.fv | self.right.fv
        return self.body.fv - {self.var}

    def __str__(self) -> str:
        from .sexpr import show_formula
        return show_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    term: Term


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    vtype: TypeExpr
    body: Formula


FALSITY = Atom(FF)
TRUTH = Atom(TT)


def neg(a: Formula) -> Formula:
    return Implies(a, FALSITY)


def exc(x: str, ty: TypeExpr, a: Formula) -> Formula:
    """Classical existence: not forall x not A."""
    return neg(Forall(x, ty, neg(a)))


def implies(*fs: Formula) -> Formula:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Implies(f, out)
    return out


def subst_formula(a: Formula, x: str, t: Term) -> Formula:
    if x not in a.fv:
        return a
    if isinstance(a, Atom):
        return Atom(subst(a.term, x, t))
    if isinstance(a, Implies):
        return Implies(subst_formula(a.left, x, t), subst_formula(a.right, x, t))
    if a.var == x:
        return a
    if a.var in t.fv:
        y = fresh_name(a.var)
        body = subst_formula(a.body, a.var, Var(y, a.vtype))
        return Forall(y, a.vtype, subst_formula(body, x, t))
    return Forall(a.var, a.vtype, subst_formula(a.body, x, t))


def formula_eq(a: Formula, b: Formula) -> bool:
    """Structural equality, r-equality on atoms, alpha on quantifiers."""
    if a is b:
        return True
    if isinstance(a, Atom) and isinstance(b, Atom):
        return r_equal(a.term, b.term)
    if isinstance(a, Implies) and isinstance(b, Implies):
        return formula_eq(a.left, b.left) and formula_eq(a.right, b.right)
    if isinstance(a, Forall) and isinstance(b, Forall):
        if a.vtype != b.vtype:
            return False
        if a.var == b.var:
            return formula_eq(a.body, b.body)
        z = Var(fresh_name("q"), a.vtype)
        return formula_eq(subst_formula(a.body, a.var, z), subst_formula(b.body, b.var, z))
    return False


def formula_size(a: Formula) -> int:
    if isinstance(a, Atom):
        return 1 + term_size(a.term)
    if isinstance(a, Implies):
        return 1 + formula_size(a.left) + formula_size(a.right)
    return 1 + formula_size(a.body)


def formula_depth(a: Formula) -> int:
    if isinstance(a, Atom):
        return 0
    if isinstance(a, Implies):
        return 1 + max(formula_depth(a.left), formula_depth(a.right))
    return 1 + formula_depth(a.body)


def formula_terms(a: Formula):
    if isinstance(a, Atom):
        yield a.term
    elif isinstance(a, Implies):
        yield from formula_terms(a.left)
        yield from formula_terms(a.right)
    else:
        yield from formula_terms(a.body)


# --------------------------------------------------------------------------
# proofs

class Proof:
    def __str__(self) -> str:
        from .sexpr import show_proof
        return show_proof(self)


@dataclass(frozen=True)
class Assume(Proof):
    name: str
    formula: Formula


@dataclass(frozen=True)
class ImpIntro(Proof):
    name: str
    formula: Formula
    body: Proof


@dataclass(frozen=True)
class ImpElim(Proof):
    fn: Proof
    arg: Proof


@dataclass(frozen=True)
class AllIntro(Proof):
    var: str
    vtype: TypeExpr
    body: Proof


@dataclass(frozen=True)
class AllElim(Proof):
    fn: Proof
    term: Term


@dataclass(frozen=True)
class Truth(Proof):
    pass


@dataclass(frozen=True)
class Cases(Proof):
    """Fully applied boolean case axiom proving ``A(b)`` from ``A(tt)`` and ``A(ff)``."""
    hole: str
    motive: Formula
    scrutinee: Term
    if_tt: Proof
    if_ff: Proof

    def instance(self, t: Term) -> Formula:
        return subst_formula(self.motive, self.hole, t)


@dataclass(frozen=True)
class Ind(Proof):
    """Fully applied induction: ``A(n)`` from ``A(0)`` and ``forall k (A(k) -> A(S k))``."""
    hole: str
    motive: Formula
    scrutinee: Term
    base: Proof
    step_var: str
    ih: str
    step: Proof

    def instance(self, t: Term) -> Formula:
        return subst_formula(self.motive, self.hole, t)


ProofTerm = Proof


def proof_children(p: Proof) -> tuple:
    if isinstance(p, ImpIntro):
        return (p.body,)
    if isinstance(p, ImpElim):
        return (p.fn, p.arg)
    if isinstance(p, AllIntro):
        return (p.body,)
    if isinstance(p, AllElim):
        return (p.fn,)
    if isinstance(p, Cases):
        return (p.if_tt, p.if_ff)
    if isinstance(p, Ind):
        return (p.base, p.step)
    return ()


def fa(p: Proof) -> dict[str, Formula]:
    """Open assumption variables with their formulas."""
    if isinstance(p, Assume):
        return {p.name: p.formula}
    if isinstance(p, ImpIntro):
        out = fa(p.body)
        out.pop(p.name, None)
        return out
    if isinstance(p, Ind):
        out = fa(p.base)
        step = fa(p.step)
        step.pop(p.ih, None)
        for k, v in step.items():
            out.setdefault(k, v)
        return out
    out: dict[str, Formula] = {}
    for c in proof_children(p):
        for k, v in fa(c).items():
            out.setdefault(k, v)
    return out


def fv(p: Proof) -> frozenset:
    """Free object variables of a proof, including those in its formulas."""
    if isinstance(p, Assume):
        return p.formula.fv
    if isinstance(p, ImpIntro):
        return p.formula.fv | fv(p.body)
    if isinstance(p, ImpElim):
        return fv(p.fn) | fv(p.arg)
    if isinstance(p, AllIntro):
        return fv(p.body) - {p.var}
    if isinstance(p, AllElim):
        return fv(p.fn) | p.term.fv
    if isinstance(p, Truth):
        return frozenset()
    if isinstance(p, Cases):
        return (p.motive.fv - {p.hole}) | p.scrutinee.fv | fv(p.if_tt) | fv(p.if_ff)
    if isinstance(p, Ind):
        return ((p.motive.fv - {p.hole}) | p.scrutinee.fv | fv(p.base)
                | (fv(p.step) - {p.step_var}))
    raise ProofError(f"not a proof: {p!r}")


def msl(p: Proof) -> int:
    """Maximal sequent length: max number of open assumptions over all subproofs."""
    best = len(fa(p))
    for c in proof_children(p):
        best = max(best, msl(c))
    return best


def proof_size(p: Proof) -> int:
    """Proof nodes plus the sizes of embedded object terms."""
    n = 1 + sum(proof_size(c) for c in proof_children(p))
    if isinstance(p, AllElim):
        n += term_size(p.term)
    elif isinstance(p, (Cases, Ind)):
        n += term_size(p.scrutinee)
    return n


def subst_proof(p: Proof, u: str, n: Proof) -> Proof:
    """Replace the open assumption ``u`` by the proof ``n``."""
    if u not in fa(p):
        return p
    if isinstance(p, Assume):
        return n
    if isinstance(p, ImpIntro):
        return ImpIntro(p.name, p.formula, subst_proof(p.body, u, n))
    if isinstance(p, ImpElim):
        return ImpElim(subst_proof(p.fn, u, n), subst_proof(p.arg, u, n))
    if isinstance(p, AllIntro):
        return AllIntro(p.var, p.vtype, subst_proof(p.body, u, n))
    if isinstance(p, AllElim):
        return AllElim(subst_proof(p.fn, u, n), p.term)
    if isinstance(p, Cases):
        return Cases(p.hole, p.motive, p.scrutinee,
                     subst_proof(p.if_tt, u, n), subst_proof(p.if_ff, u, n))
    if isinstance(p, Ind):
        return Ind(p.hole, p.motive, p.scrutinee, subst_proof(p.base, u, n),
                   p.step_var, p.ih, subst_proof(p.step, u, n))
    return p


# --------------------------------------------------------------------------
# checking

def check_proof(p: Proof, ctx: Optional[Mapping[str, TypeExpr]] = None) -> Formula:
    """Return the conclusion of ``p`` or raise a :class:`ProofError`.

    ``ctx`` types the free object variables; when omitted the annotations on
    variable occurrences are trusted.
    """
    open_seen: dict[str, Formula] = {}

    def term_type(t: Term, objs: dict, path: str) -> TypeExpr:
        try:
            full = None if ctx is None else {**ctx, **objs}
            return infer_type(t, full)
        except KernelError as e:
            raise IllTypedEmbeddedTerm(f"at {path or '<root>'}: {e}") from e

    def check_formula(a: Formula, objs: dict, path: str) -> None:
        if isinstance(a, Atom):
            ty = term_type(a.term, objs, path)
            if ty != BOOL:
                raise IllTypedEmbeddedTerm(f"at {path or '<root>'}: atom of type {ty}")
        elif isinstance(a, Implies):
            check_formula(a.left, objs, path)
            check_formula(a.right, objs, path)
        else:
            check_formula(a.body, {**objs, a.var: a.vtype}, path)

    def expect(found: Formula, expected: Formula, path: str) -> None:
        if not formula_eq(found, expected):
            raise ConclusionMismatch(expected, found, path)

    def go(q: Proof, hyps: dict, objs: dict, path: str) -> Formula:
        if isinstance(q, Assume):
            check_formula(q.formula, objs, path)
            if q.name in hyps:
                if not formula_eq(hyps[q.name], q.formula):
                    raise AssumptionTypeClash(
                        f"{q.name} bound to {hyps[q.name]} but used as {q.formula}")
            else:
                prev = open_seen.setdefault(q.name, q.formula)
                if not formula_eq(prev, q.formula):
                    raise AssumptionTypeClash(
                        f"open assumption {q.name} used at {prev} and {q.formula}")
            return q.formula
        if isinstance(q, ImpIntro):
            check_formula(q.formula, objs, path)
            body = go(q.body, {**hyps, q.name: q.formula}, objs, path + "/imp-intro")
            return Implies(q.formula, body)
        if isinstance(q, ImpElim):
            f = go(q.fn, hyps, objs, path + "/fn")
            a = go(q.arg, hyps, objs, path + "/arg")
            if not isinstance(f, Implies):
                raise ConclusionMismatch("an implication", f, path + "/fn")
            expect(a, f.left, path + "/arg")
            return f.right
        if isinstance(q, AllIntro):
            _eigen(q.var, q.body, hyps, path)
            body = go(q.body, hyps, {**objs, q.var: q.vtype}, path + "/all-intro")
            return Forall(q.var, q.vtype, body)
        if isinstance(q, AllElim):
            f = go(q.fn, hyps, objs, path + "/fn")
            if not isinstance(f, Forall):
                raise ConclusionMismatch("a universal formula", f, path + "/fn")
            ty = term_type(q.term, objs, path)
            if ty != f.vtype:
                raise IllTypedEmbeddedTerm(
                    f"at {path or '<root>'}: instance of type {ty}, expected {f.vtype}")
            return subst_formula(f.body, f.var, q.term)
        if isinstance(q, Truth):
            return TRUTH
        if isinstance(q, Cases):
            inner = {**objs, q.hole: BOOL}
            check_formula(q.motive, inner, path)
            if term_type(q.scrutinee, objs, path) != BOOL:
                raise IllTypedEmbeddedTerm(f"at {path or '<root>'}: cases on non-bool")
            expect(go(q.if_tt, hyps, objs, path + "/tt"), q.instance(TT), path + "/tt")
            expect(go(q.if_ff, hyps, objs, path + "/ff"), q.instance(FF), path + "/ff")
            return q.instance(q.scrutinee)
        if isinstance(q, Ind):
            check_formula(q.motive, {**objs, q.hole: NAT}, path)
            if term_type(q.scrutinee, objs, path) != NAT:
                raise IllTypedEmbeddedTerm(f"at {path or '<root>'}: induction on non-nat")
            expect(go(q.base, hyps, objs, path + "/base"), q.instance(ZERO), path + "/base")
            k = Var(q.step_var, NAT)
            ih = q.instance(k)
            inner_hyps = {**hyps, q.ih: ih}
            _eigen(q.step_var, q.step, inner_hyps, path, exempt=q.ih)
            concl = go(q.step, inner_hyps, {**objs, q.step_var: NAT}, path + "/step")
            expect(concl, q.instance(App(SUCC, k)), path + "/step")
            return q.instance(q.scrutinee)
        raise ProofError(f"not a proof: {q!r}")

    def _eigen(x: str, body: Proof, hyps: dict, path: str, exempt: str = None) -> None:
        for u, a in fa(body).items():
            if u == exempt:
                continue
            formula = hyps.get(u, a)
            if x in formula.fv:
                raise EigenvariableViolation(
                    f"at {path or '<root>'}: {x} free in open assumption {u}: {formula}")

    return go(p, {}, {} if ctx is None else {}, "")


# --------------------------------------------------------------------------
# derived classical principles

_names = itertools.count()


def _fresh(base: str) -> str:
    return f"{base}{next(_names)}"


def mk_efq(a: Formula) -> Proof:
    """A proof of ``F -> A``."""
    w = _fresh("w")
    return ImpIntro(w, FALSITY, _efq_body(a, Assume(w, FALSITY)))


def _efq_body(a: Formula, falsum: Proof) -> Proof:
    if isinstance(a, Atom):
        x = _fresh("b")
        motive = Atom(Var(x, BOOL))
        return Cases(x, motive, a.term, Truth(), falsum)
    if isinstance(a, Implies):
        u = _fresh("u")
        return ImpIntro(u, a.left, _efq_body(a.right, falsum))
    y = fresh_name(a.var)
    body = subst_formula(a.body, a.var, Var(y, a.vtype))
    return AllIntro(y, a.vtype, _efq_body(body, falsum))


def efq_apply(a: Formula, falsum: Proof) -> Proof:
    """Conclude ``A`` from a proof of falsity."""
    return ImpElim(mk_efq(a), falsum)


def mk_stability(a: Formula) -> Proof:
    """A proof of ``((A -> F) -> F) -> A``."""
    w = _fresh("w")
    nna = neg(neg(a))
    return ImpIntro(w, nna, _stab_body(a, Assume(w, nna)))


def _stab_body(a: Formula, nn: Proof) -> Proof:
    if isinstance(a, Atom):
        x = _fresh("b")
        xb = Var(x, BOOL)
        motive = Implies(neg(neg(Atom(xb))), Atom(xb))
        w1, w2, z = _fresh("w"), _fresh("w"), _fresh("z")
        tt_case = ImpIntro(w1, neg(neg(TRUTH)), Truth())
        ff_case = ImpIntro(w2, neg(neg(FALSITY)),
                           ImpElim(Assume(w2, neg(neg(FALSITY))),
                                   ImpIntro(z, FALSITY, Assume(z, FALSITY))))
        return ImpElim(Cases(x, motive, a.term, tt_case, ff_case), nn)
    if isinstance(a, Implies):
        # lam a. stab(B) (lam v:~B. nn (lam f:A->B. v (f a)))
        ua, v, f = _fresh("a"), _fresh("v"), _fresh("f")
        inner = ImpIntro(v, neg(a.right),
                         ImpElim(nn, ImpIntro(f, a,
                                              ImpElim(Assume(v, neg(a.right)),
                                                      ImpElim(Assume(f, a), Assume(ua, a.left))))))
        return ImpIntro(ua, a.left, _stab_body(a.right, inner))
    y = fresh_name(a.var)
    yv = Var(y, a.vtype)
    body = subst_formula(a.body, a.var, yv)
    v, f = _fresh("v"), _fresh("f")
    inner = ImpIntro(v, neg(body),
                     ImpElim(nn, ImpIntro(f, a,
                                          ImpElim(Assume(v, neg(body)),
                                                  AllElim(Assume(f, a), yv)))))
    return AllIntro(y, a.vtype, _stab_body(body, inner))
