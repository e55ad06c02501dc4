"""Extraction of programs from proofs.

Every proof node yields a definition context ``E`` (a function of the
conclusion's challenge), a positive witness and one negative witness per open
assumption; the witnesses live inside ``E`` so that shared work is written
down once. Multi-component results are right-nested tuples with nulltype
components dropped, and all projections are taken with the *logical*
component types.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .dialectica import (
    DefContext, lazy_or, plug, tau, tc_check,
)
from .logic import (
    TRUTH, AllElim, AllIntro, Assume, Cases, Forall, Formula, ImpElim, Implies, ImpIntro, Ind,
    Proof, ProofError, Truth, check_proof, msl, proof_size, subst_formula,
)
from .terms import (
    EPS_T, FF, MBOT, MFF, MTT, TT, Lam, Term, Var, canonical_inhabitant, fresh_name, fresh_scope,
    if_then_else, mark_eq, mk_app, mk_fst, mk_lam, mk_let, mk_pair, mk_snd, mk_var, rec, term_size,
)
from .types import BOOL, EPS, MARK, NAT, TypeExpr, arrow, prod


class ExtractionError(Exception):
    pass


class UncheckedProof(ExtractionError):
    pass


class UnsupportedNode(ExtractionError):
    pass


class SpecialCaseInapplicable(ExtractionError):
    pass


class Kind(Enum):
    QUASILINEAR = "quasilinear"
    MARKED = "marked"


class InductionMode(Enum):
    NAIVE = "naive"
    SIMULTANEOUS = "simultaneous"
    FLAGGED = "flagged"


@dataclass(frozen=True)
class Variant:
    kind: Kind = Kind.QUASILINEAR
    induction: InductionMode = InductionMode.SIMULTANEOUS
    # flips the operands of the plain contraction (first counterexample wins)
    reversed: bool = False

    @property
    def marked(self) -> bool:
        return self.kind is Kind.MARKED

    @property
    def name(self) -> str:
        out = f"{self.kind.value}/{self.induction.value}"
        return out + "/reversed" if self.reversed else out


QUASILINEAR = Variant(Kind.QUASILINEAR)
MARKED = Variant(Kind.MARKED)


@dataclass
class ExtractionResult:
    formula: Formula
    context: DefContext
    dplus: Term
    dminus: dict[str, Term]
    challenge: str
    assumption_params: dict[str, str]
    assumptions: dict[str, Formula]
    variant: Variant = field(default=QUASILINEAR)


@dataclass(frozen=True)
class ContractSpec:
    """Operands of a contraction for assumption ``u : formula``.

    ``in_first``/``in_second`` say whether the subproof producing each
    operand actually uses ``u``; an operand coming from a subproof that does
    not is a placeholder and is never returned when the other one is real.
    """
    u: str
    formula: Formula
    in_first: bool
    in_second: bool
    t1: Term
    t2: Term
    x: Term


# --------------------------------------------------------------------------
# tuples with nulltype components

def tuple_type(types: list[TypeExpr]) -> TypeExpr:
    if not types:
        return EPS
    out = types[-1]
    for t in reversed(types[:-1]):
        out = prod(t, out)
    return out


def tuple_term(terms: list[Term]) -> Term:
    if not terms:
        return EPS_T
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = mk_pair(t, out)
    return out


def tuple_proj(t: Term, types: list[TypeExpr], i: int) -> Term:
    cur = t
    for j in range(i):
        cur = mk_snd(cur, types[j], tuple_type(types[j + 1:]))
    if i < len(types) - 1:
        cur = mk_fst(cur, types[i], tuple_type(types[i + 1:]))
    return cur


def fun_tuple_proj(f: Term, dom: TypeExpr, types: list[TypeExpr], i: int) -> Term:
    if dom == EPS:
        return tuple_proj(f, types, i)
    y = fresh_name("z")
    return mk_lam(y, dom, tuple_proj(mk_app(f, Var(y, dom)), types, i))


# --------------------------------------------------------------------------
# marked witnesses

def neg_type(c: Formula, variant: Variant) -> TypeExpr:
    return tau(c, variant.marked).negative


def canonical_neg(c: Formula, variant: Variant) -> Term:
    """Placeholder counterexample for an assumption a subproof does not use."""
    value = canonical_inhabitant(tau(c, variant.marked).minus)
    return mk_pair(MTT, value) if variant.marked else value


def value_part(t: Term, c: Formula, variant: Variant) -> Term:
    return mk_snd(t, MARK, tau(c, True).minus) if variant.marked else t


def marker_part(t: Term, c: Formula) -> Term:
    return mk_fst(t, MARK, tau(c, True).minus)


def param_name(u: str) -> str:
    return f"x_{u}"


def param_var(u: str, c: Formula, variant: Variant) -> Term:
    return mk_var(param_name(u), tau(c, variant.marked).star)


# --------------------------------------------------------------------------
# contraction operators

def contract_plain(spec: ContractSpec, marked: bool = False) -> Term:
    """``if T_C x t1 then t2 else t1``; checks ``t1`` only."""
    if not spec.in_second:
        return spec.t1
    if not spec.in_first:
        return spec.t2
    ty = tau(spec.formula, marked).minus
    if ty == EPS:
        return EPS_T
    a = fresh_name("c")
    av = Var(a, ty)
    check = tc_check(spec.formula, spec.x, av, marked, spec.u)
    return mk_let(a, spec.t1, if_then_else(check, spec.t2, av))


def contract_plain_reversed(spec: ContractSpec, marked: bool = False) -> Term:
    """``if T_C x t2 then t1 else t2``; checks ``t2`` only."""
    if not spec.in_second:
        return spec.t1
    if not spec.in_first:
        return spec.t2
    ty = tau(spec.formula, marked).minus
    if ty == EPS:
        return EPS_T
    b = fresh_name("c")
    bv = Var(b, ty)
    check = tc_check(spec.formula, spec.x, bv, marked, spec.u)
    return mk_let(b, spec.t2, if_then_else(check, spec.t1, bv))


def contract_marked(spec: ContractSpec) -> Term:
    """Marker-aware contraction on ``Mark x tau-(C)`` operands.

    Prefers a confirmed counterexample, skips placeholders, and checks the
    first operand only when both markers are unknown.
    """
    if not spec.in_second:
        return spec.t1
    if not spec.in_first:
        return spec.t2
    c = spec.formula
    tm = tau(c, True).minus
    ty = prod(MARK, tm)
    a, b = fresh_name("c"), fresh_name("d")
    av, bv = Var(a, ty), Var(b, ty)
    ma, sa = mk_fst(av, MARK, tm), mk_snd(av, MARK, tm)
    mb = mk_fst(bv, MARK, tm)
    first = lazy_or(mark_eq(mb, MTT), mark_eq(ma, MFF))
    second = lazy_or(mark_eq(ma, MTT),
                     lazy_or(mark_eq(mb, MFF), tc_check(c, spec.x, sa, True, spec.u)))
    body = if_then_else(first, av, if_then_else(second, bv, mk_pair(MFF, sa)))
    return mk_let(a, spec.t1, mk_let(b, spec.t2, body))


def contract(spec: ContractSpec, variant: Variant) -> Term:
    if variant.marked:
        return contract_marked(spec)
    if variant.reversed:
        return contract_plain_reversed(spec)
    return contract_plain(spec)


def checked_contract(b: Term, spec: ContractSpec, variant: Variant = QUASILINEAR) -> Term:
    """Flagged contraction returning ``<candidate, found>``.

    Once ``b`` is true the previous candidate ``t1`` is kept without any
    check. Otherwise plain mode checks ``t1`` and moves on to ``t2`` if it
    is not a counterexample; marked mode delegates to the marked contraction
    and reads the flag off the resulting marker.
    """
    if not spec.in_second:
        return mk_pair(spec.t1, b)
    c = spec.formula
    if variant.marked:
        tm = tau(c, True).minus
        ty = prod(MARK, tm)
        a, r = fresh_name("c"), fresh_name("r")
        av, rv = Var(a, ty), Var(r, ty)
        joined = contract_marked(ContractSpec(spec.u, c, spec.in_first, True, av, spec.t2, spec.x))
        found = mark_eq(mk_fst(rv, MARK, tm), MFF)
        return mk_let(a, spec.t1, if_then_else(b, mk_pair(av, TT),
                                               mk_let(r, joined, mk_pair(rv, found))))
    ty = tau(c).minus
    a = fresh_name("c")
    av = mk_var(a, ty)
    check = tc_check(c, spec.x, av, False, spec.u)
    body = if_then_else(b, mk_pair(av, TT),
                        if_then_else(check, mk_pair(spec.t2, FF), mk_pair(av, TT)))
    return mk_let(a, spec.t1, body)


# --------------------------------------------------------------------------
# the extractor

def _lam(name: str, ty: TypeExpr) -> tuple:
    return ("lam", name, ty)


def _arg(t: Term) -> tuple:
    return ("arg", t)


def _union(*dicts: dict, drop: Optional[str] = None) -> dict[str, Formula]:
    out: dict[str, Formula] = {}
    for d in dicts:
        for k, v in d.items():
            if k != drop:
                out.setdefault(k, v)
    return out


class _Extractor:
    def __init__(self, variant: Variant):
        self.variant = variant

    # helpers -------------------------------------------------------------
    def neg(self, c: Formula) -> TypeExpr:
        return neg_type(c, self.variant)

    def tau(self, a: Formula):
        return tau(a, self.variant.marked)

    def result(self, a, frames, dplus, dminus, y, assums) -> ExtractionResult:
        return ExtractionResult(a, DefContext(tuple(frames)), dplus, dminus, y,
                                {u: param_name(u) for u in assums}, assums, self.variant)

    def padded_full(self, r: ExtractionResult, assums: dict[str, Formula]) -> Term:
        comps = [r.dplus] + [r.dminus[u] if u in r.dminus else canonical_neg(c, self.variant)
                             for u, c in assums.items()]
        return plug(r.context, tuple_term(comps))

    def from_bundle(self, a: Formula, y: str, bundle: Term, assums: dict[str, Formula],
                    comp_types: list[TypeExpr], take=None) -> ExtractionResult:
        """Context ``lam y. let r := bundle in <>`` with witnesses projected from ``r``."""
        ty = tuple_type(comp_types)
        r = fresh_name("r")
        rv = mk_var(r, ty)
        frames = [_lam(y, self.tau(a).minus)]
        if ty != EPS:
            frames += [_arg(bundle), _lam(r, ty)]
        take = take or (lambda t, i: t)
        dplus = tuple_proj(rv, comp_types, 0)
        dminus = {u: take(tuple_proj(rv, comp_types, i + 1), i) for i, u in enumerate(assums)}
        return self.result(a, frames, dplus, dminus, y, assums)

    # dispatch ------------------------------------------------------------
    def run(self, p: Proof) -> ExtractionResult:
        method = getattr(self, "do_" + type(p).__name__, None)
        if method is None:
            raise UnsupportedNode(type(p).__name__)
        return method(p)

    def do_Assume(self, p: Assume) -> ExtractionResult:
        t = self.tau(p.formula)
        y = fresh_name("y")
        yv = mk_var(y, t.minus)
        dplus = mk_app(param_var(p.name, p.formula, self.variant), yv)
        dminus = mk_pair(MBOT, yv) if self.variant.marked else yv
        return self.result(p.formula, [_lam(y, t.minus)], dplus, {p.name: dminus}, y,
                           {p.name: p.formula})

    def do_Truth(self, p: Truth) -> ExtractionResult:
        return self.result(TRUTH, [], EPS_T, {}, fresh_name("y"), {})

    def do_ImpIntro(self, p: ImpIntro) -> ExtractionResult:
        rm = self.run(p.body)
        a = Implies(p.formula, rm.formula)
        tb, tc, ta = self.tau(p.formula), self.tau(rm.formula), self.tau(a)
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)
        frames = [_lam(y, ta.minus), _arg(mk_fst(yv, tb.star, tc.minus)),
                  _lam(param_name(p.name), tb.star), _arg(mk_snd(yv, tb.star, tc.minus)),
                  *rm.context.frames]
        du = rm.dminus.get(p.name)
        if du is None:
            du = canonical_neg(p.formula, self.variant)
        dminus = {u: t for u, t in rm.dminus.items() if u != p.name}
        assums = {u: c for u, c in rm.assumptions.items() if u != p.name}
        return self.result(a, frames, mk_pair(rm.dplus, du), dminus, y, assums)

    def do_AllIntro(self, p: AllIntro) -> ExtractionResult:
        rm = self.run(p.body)
        a = Forall(p.var, p.vtype, rm.formula)
        tb, ta = self.tau(rm.formula), self.tau(a)
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)
        frames = [_lam(y, ta.minus), _arg(mk_fst(yv, p.vtype, tb.minus)),
                  _lam(p.var, p.vtype), _arg(mk_snd(yv, p.vtype, tb.minus)),
                  *rm.context.frames]
        return self.result(a, frames, rm.dplus, dict(rm.dminus), y, dict(rm.assumptions))

    def do_AllElim(self, p: AllElim) -> ExtractionResult:
        rm = self.run(p.fn)
        if not isinstance(rm.formula, Forall):
            raise UncheckedProof("instantiation of a non-universal formula")
        a = subst_formula(rm.formula.body, rm.formula.var, p.term)
        ta = self.tau(a)
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)
        frames = [_lam(y, ta.minus), _arg(mk_pair(p.term, yv)), *rm.context.frames]
        return self.result(a, frames, rm.dplus, dict(rm.dminus), y, dict(rm.assumptions))

    def do_ImpElim(self, p: ImpElim) -> ExtractionResult:
        rm, rn = self.run(p.fn), self.run(p.arg)
        imp = rm.formula
        if not isinstance(imp, Implies):
            raise UncheckedProof("application of a non-implication")
        a, b = imp.right, imp.left
        ta, tb = self.tau(a), self.tau(b)
        negb = self.neg(b)
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)

        n_types = [tb.plus] + [self.neg(c) for c in rn.assumptions.values()]
        n_full = plug(rn.context, tuple_term([rn.dplus] + list(rn.dminus.values())))
        nf = fresh_name("nf")
        nf_ty = arrow(tb.minus, tuple_type(n_types))
        nfv = mk_var(nf, nf_ty)
        nstar = fun_tuple_proj(nfv, tb.minus, n_types, 0)

        w = fresh_name("w")
        w_ty = self.tau(imp).plus
        wv = mk_var(w, w_ty)
        dplus = mk_fst(wv, ta.plus, negb)
        zb = mk_snd(wv, ta.plus, negb)
        if self.variant.marked:
            zb = mk_snd(zb, MARK, tb.minus)

        frames = [_lam(y, ta.minus), _arg(n_full), _lam(nf, nf_ty),
                  _arg(mk_pair(nstar, yv)), *rm.context.frames,
                  _arg(rm.dplus), _lam(w, w_ty)]
        nz = fresh_name("nz")
        nz_ty = tuple_type(n_types)
        nzv = mk_var(nz, nz_ty)
        if rn.assumptions:
            frames += [_arg(mk_app(nfv, zb)), _lam(nz, nz_ty)]

        assums = _union(rm.assumptions, rn.assumptions)
        n_index = {u: i + 1 for i, u in enumerate(rn.assumptions)}
        dminus = {}
        for u, c in assums.items():
            t2 = tuple_proj(nzv, n_types, n_index[u]) if u in n_index else EPS_T
            spec = ContractSpec(u, c, u in rm.dminus, u in n_index,
                                rm.dminus.get(u, EPS_T), t2,
                                param_var(u, c, self.variant))
            dminus[u] = contract(spec, self.variant)
        return self.result(a, frames, dplus, dminus, y, assums)

    def do_Cases(self, p: Cases) -> ExtractionResult:
        r1, r2 = self.run(p.if_tt), self.run(p.if_ff)
        a = p.instance(p.scrutinee)
        ta = self.tau(a)
        assums = _union(r1.assumptions, r2.assumptions)
        types = [ta.plus] + [self.neg(c) for c in assums.values()]
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)
        if tuple_type(types) == EPS:
            return self.from_bundle(a, y, EPS_T, assums, types)
        sel = if_then_else(p.scrutinee, mk_app(self.padded_full(r1, assums), yv),
                           mk_app(self.padded_full(r2, assums), yv))
        return self.from_bundle(a, y, sel, assums, types)

    def do_Ind(self, p: Ind) -> ExtractionResult:
        mode = self.variant.induction
        if mode is not InductionMode.SIMULTANEOUS:
            try:
                return extract_induction_special(p, mode, self.variant, self)
            except SpecialCaseInapplicable:
                pass
        return self.induction_general(p)

    # induction -----------------------------------------------------------
    def ind_parts(self, p: Ind):
        rb, rs = self.run(p.base), self.run(p.step)
        a = p.instance(p.scrutinee)
        assums = _union(rb.assumptions, rs.assumptions, drop=p.ih)
        ih_formula = p.instance(Var(p.step_var, NAT))
        return rb, rs, a, assums, ih_formula

    def induction_general(self, p: Ind) -> ExtractionResult:
        rb, rs, a, assums, ih_formula = self.ind_parts(p)
        ta = self.tau(a)
        types = [ta.plus] + [self.neg(c) for c in assums.values()]
        tt_ = tuple_type(types)
        bt = arrow(ta.minus, tt_)
        y0 = fresh_name("y")
        if tt_ == EPS:
            return self.from_bundle(a, y0, EPS_T, assums, types)

        base = self.padded_full(rb, assums)
        prev = fresh_name("prev")
        prevv = Var(prev, bt)
        y = fresh_name("y")
        yv = mk_var(y, ta.minus)
        xv = param_name(p.ih)
        dv = rs.dminus.get(p.ih)
        chal = (value_part(dv, ih_formula, self.variant) if dv is not None
                else canonical_inhabitant(ta.minus))
        pv = fresh_name("pv")
        pvv = mk_var(pv, tt_)
        frames = [_lam(y, ta.minus), _arg(fun_tuple_proj(prevv, ta.minus, types, 0)),
                  _lam(xv, ta.star), _arg(yv), *rs.context.frames,
                  _arg(mk_app(prevv, chal)), _lam(pv, tt_)]
        comps = [rs.dplus]
        for i, (u, c) in enumerate(assums.items()):
            spec = ContractSpec(u, c, u in rs.dminus, True, rs.dminus.get(u, EPS_T),
                                tuple_proj(pvv, types, i + 1), param_var(u, c, self.variant))
            comps.append(contract(spec, self.variant))
        step = Lam(p.step_var, NAT, Lam(prev, bt, plug(DefContext(tuple(frames)),
                                                       tuple_term(comps))))
        y0v = mk_var(y0, ta.minus)
        bundle = mk_app(rec(p.scrutinee, base, step), y0v)
        return self.from_bundle(a, y0, bundle, assums, types)


def extract_induction_special(p: Ind, mode: InductionMode, variant: Variant = QUASILINEAR,
                              extractor: Optional[_Extractor] = None) -> ExtractionResult:
    """Induction with a nulltype challenge, in one of the specialised recursion shapes."""
    ex = extractor or _Extractor(variant)
    a = p.instance(p.scrutinee)
    if ex.tau(a).minus != EPS:
        raise SpecialCaseInapplicable(f"challenge type of {a} is not the nulltype")
    if mode is InductionMode.SIMULTANEOUS:
        return ex.induction_general(p)
    if mode is InductionMode.NAIVE:
        return _naive(ex, p)
    return _flagged(ex, p)


def _naive(ex: _Extractor, p: Ind) -> ExtractionResult:
    """Separate recursions; each negative step recomputes the positive one."""
    rb, rs, a, assums, _ = ex.ind_parts(p)
    ta = ex.tau(a)
    k = p.step_var
    xv = param_name(p.ih)
    base_plus = plug(rb.context, rb.dplus)
    step_plus = Lam(k, NAT, mk_lam(xv, ta.plus, plug(rs.context, rs.dplus)))

    def plus_at(n: Term) -> Term:
        return EPS_T if ta.plus == EPS else rec(n, base_plus, step_plus)

    dminus = {}
    for u, c in assums.items():
        ty = ex.neg(c)
        if ty == EPS:
            dminus[u] = EPS_T
            continue
        base = (plug(rb.context, rb.dminus[u]) if u in rb.dminus
                else canonical_neg(c, ex.variant))
        new = EPS_T
        if u in rs.dminus:
            new = mk_let(xv, plus_at(Var(k, NAT)), plug(rs.context, rs.dminus[u]))
        q = fresh_name("p")
        spec = ContractSpec(u, c, u in rs.dminus, True, new, Var(q, ty),
                            param_var(u, c, ex.variant))
        dminus[u] = rec(p.scrutinee, base, Lam(k, NAT, Lam(q, ty, contract(spec, ex.variant))))
    return ex.result(a, [], plus_at(p.scrutinee), dminus, fresh_name("y"), assums)


def _flagged(ex: _Extractor, p: Ind) -> ExtractionResult:
    rb, rs, a, assums, _ = ex.ind_parts(p)
    ta = ex.tau(a)
    negs = [ex.neg(c) for c in assums.values()]
    flagged = [prod(t, BOOL) for t in negs]
    types = [ta.plus] + flagged
    tt_ = tuple_type(types)
    base_comps = [rb.dplus] + [
        mk_pair(rb.dminus[u] if u in rb.dminus else canonical_neg(c, ex.variant), FF)
        for u, c in assums.items()]
    base = plug(rb.context, tuple_term(base_comps))
    q = fresh_name("q")
    qv = Var(q, tt_)
    xv = param_name(p.ih)
    frames = [_arg(tuple_proj(qv, types, 0)), _lam(xv, ta.plus), *rs.context.frames]
    comps = [rs.dplus]
    for i, (u, c) in enumerate(assums.items()):
        slot = tuple_proj(qv, types, i + 1)
        prev, found = mk_fst(slot, negs[i], BOOL), mk_snd(slot, negs[i], BOOL)
        spec = ContractSpec(u, c, True, u in rs.dminus, prev, rs.dminus.get(u, EPS_T),
                            param_var(u, c, ex.variant))
        comps.append(checked_contract(found, spec, ex.variant))
    step = Lam(p.step_var, NAT, Lam(q, tt_, plug(DefContext(tuple(frames)), tuple_term(comps))))
    bundle = rec(p.scrutinee, base, step)
    y = fresh_name("y")
    return ex.from_bundle(a, y, bundle, assums, types,
                          take=lambda t, i: mk_fst(t, negs[i], BOOL))


# --------------------------------------------------------------------------
# entry points

def extract(p: Proof, variant: Variant = QUASILINEAR, check: bool = True) -> ExtractionResult:
    if check:
        try:
            check_proof(p)
        except ProofError as e:
            raise UncheckedProof(str(e)) from e
    with fresh_scope():
        return _Extractor(variant).run(p)


@dataclass(frozen=True)
class Assembled:
    full: Term
    plus: Term
    minus: dict


def assemble(res: ExtractionResult) -> Assembled:
    full = plug(res.context, tuple_term([res.dplus] + list(res.dminus.values())))
    return Assembled(full, plug(res.context, res.dplus),
                     {u: plug(res.context, t) for u, t in res.dminus.items()})


def size_report(p: Proof, res: ExtractionResult) -> dict:
    size = proof_size(p)
    m = msl(p)
    extracted = term_size(assemble(res).full)
    return {"proof_size": size, "msl": m, "extracted_size": extracted,
            "ratio": extracted / (size + m * m)}
