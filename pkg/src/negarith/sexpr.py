"""S-expression syntax for types, terms, formulas and proofs (``.naw`` files).

Grammar::

    type    ::= bool | nat | mark | 'a | (-> type type ...) | (* type type ...)
    term    ::= x | N | tt | ff | mtt | mff | mbot | succ | meq
              | (lam (x type) ... term) | (let (x term) term) | (term term ...)
              | (pair term term) | (fst term) | (snd term) | (succ term)
              | (if term term term) | (rec term term term)
              | (mcase term term term term) | (meq term term)
              | (if@ type) | (rec@ type) | (mcase@ type) | (check label term)
    formula ::= (atom term) | F | (-> formula formula ...) | (all x type formula)
              | (not formula) | (exc x type formula)
    proof   ::= (assume u formula) | (imp-intro u formula proof)
              | (imp-elim proof proof) | (all-intro x type proof)
              | (all-elim proof term) | (truth)
              | (cases (x formula) term proof proof)
              | (ind (x formula) term proof k u proof)
              | (efq formula proof) | (stab formula)
    file    ::= (var x type)* ((proof proof) | (term term))

Binders are renamed on input so that every bound name in a file is unique.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import logic as L
from .terms import (
    EPS_T, FF, MBOT, MEQ, MFF, MTT, SUCC, TT, ZERO, App, Check, Const, EpsTerm, Fst, Lam,
    Lit, Pair, Snd, Term, Var, apps, mcase_const, numeral, numeral_value, rec_const,
    if_const, spine,
)
from .types import BOOL, EPS, HOLE, MARK, NAT, Arrow, Prod, TypeExpr, TypeVar


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str):
        super().__init__(f"{line}:{col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class DuplicateBinder(ParseError):
    pass


@dataclass
class Sym:
    text: str
    line: int
    col: int


@dataclass
class SList:
    items: list
    line: int
    col: int


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")


def read_all(text: str) -> list:
    """Read every top-level s-expression in ``text``."""
    stack: list[SList] = []
    out: list = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group(0)
        if tok == "(":
            stack.append(SList([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError(line, col, "an expression before ')'")
            done = stack.pop()
            (stack[-1].items if stack else out).append(done)
        elif not tok[0].isspace() and tok[0] != ";":
            (stack[-1].items if stack else out).append(Sym(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    if stack:
        raise ParseError(line, col, "')'")
    return out


def _where(x) -> tuple[int, int]:
    return x.line, x.col


def _head(x) -> Optional[str]:
    if isinstance(x, SList) and x.items and isinstance(x.items[0], Sym):
        return x.items[0].text
    return None


def _arity(x: SList, n: int, what: str) -> None:
    if len(x.items) != n:
        raise ParseError(*_where(x), f"{what} with {n - 1} argument(s), got {len(x.items) - 1}")


def _sym(x, what: str) -> str:
    if not isinstance(x, Sym):
        raise ParseError(*_where(x), what)
    return x.text


# --------------------------------------------------------------------------
# reader: s-expressions to syntax trees

class Reader:
    """Builds syntax trees, renaming binders apart."""

    def __init__(self, free: Optional[dict] = None):
        self.free: dict[str, TypeExpr] = dict(free or {})
        self.used: set[str] = set(self.free)

    def _bind(self, name: str) -> str:
        if name not in self.used:
            self.used.add(name)
            return name
        k = 1
        while f"{name}_{k}" in self.used:
            k += 1
        new = f"{name}_{k}"
        self.used.add(new)
        return new

    # types
    def type(self, x) -> TypeExpr:
        if isinstance(x, Sym):
            t = x.text
            if t == "bool":
                return BOOL
            if t == "nat":
                return NAT
            if t == "mark":
                return MARK
            if t == "eps":
                return EPS
            if t == "hole":
                return HOLE
            if t.startswith("'") and len(t) > 1:
                return TypeVar(t[1:])
            raise ParseError(*_where(x), f"a type, got {t!r}")
        h = _head(x)
        if h in ("->", "*") and len(x.items) >= 3:
            parts = [self.type(i) for i in x.items[1:]]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Arrow(p, out) if h == "->" else Prod(p, out)
            return out
        raise ParseError(*_where(x), "a type")

    # terms
    def term(self, x, env: dict) -> Term:
        if isinstance(x, Sym):
            t = x.text
            if t in env:
                return Var(env[t], self._scope_types[env[t]])
            if t in self.free:
                return Var(t, self.free[t])
            if re.fullmatch(r"\d+", t):
                return numeral(int(t))
            consts = {"tt": TT, "ff": FF, "mtt": MTT, "mff": MFF, "mbot": MBOT,
                      "succ": SUCC, "meq": MEQ, "zero": ZERO, "eps": EPS_T}
            if t in consts:
                return consts[t]
            raise ParseError(*_where(x), f"a bound or declared variable, got {t!r}")
        if not isinstance(x, SList) or not x.items:
            raise ParseError(*_where(x), "a term")
        h = _head(x)
        it = x.items
        if h == "lam":
            if len(it) < 3:
                raise ParseError(*_where(x), "(lam (x type) ... body)")
            binders = it[1:-1]
            inner = dict(env)
            seen: set[str] = set()
            made = []
            for b in binders:
                if not (isinstance(b, SList) and len(b.items) == 2):
                    raise ParseError(*_where(b), "a binder (x type)")
                name = _sym(b.items[0], "a binder name")
                if name in seen:
                    raise DuplicateBinder(*_where(b), f"distinct binder names, {name!r} repeated")
                seen.add(name)
                ty = self.type(b.items[1])
                new = self._bind(name)
                self._scope_types[new] = ty
                inner[name] = new
                made.append((new, ty))
            body = self.term(it[-1], inner)
            for new, ty in reversed(made):
                body = Lam(new, ty, body)
            return body
        if h == "let":
            _arity(x, 3, "let")
            b = it[1]
            if not (isinstance(b, SList) and len(b.items) == 2):
                raise ParseError(*_where(b), "a let binding (x term)")
            value = self.term(b.items[1], env)
            name = _sym(b.items[0], "a binder name")
            new = self._bind(name)
            self._scope_types[new] = value.ty
            body = self.term(it[2], {**env, name: new})
            return App(Lam(new, value.ty, body), value)
        if h == "pair":
            _arity(x, 3, "pair")
            return Pair(self.term(it[1], env), self.term(it[2], env))
        if h in ("fst", "snd"):
            _arity(x, 2, h)
            inner = self.term(it[1], env)
            return Fst(inner) if h == "fst" else Snd(inner)
        if h == "succ" and len(it) == 2:
            return App(SUCC, self.term(it[1], env))
        if h == "if" and "if" not in env:
            _arity(x, 4, "if")
            b, s, t = (self.term(i, env) for i in it[1:])
            return apps(if_const(s.ty), b, s, t)
        if h == "rec" and "rec" not in env:
            _arity(x, 4, "rec")
            n, s, t = (self.term(i, env) for i in it[1:])
            return apps(rec_const(s.ty), n, s, t)
        if h == "mcase" and "mcase" not in env:
            _arity(x, 5, "mcase")
            m, a, b, c = (self.term(i, env) for i in it[1:])
            return apps(mcase_const(a.ty), m, a, b, c)
        if h in ("if@", "rec@", "mcase@"):
            _arity(x, 2, h)
            return Const(h[:-1], self.type(it[1]))
        if h == "check":
            _arity(x, 3, "check")
            return Check(_sym(it[1], "a label"), self.term(it[2], env))
        if len(it) < 2:
            raise ParseError(*_where(x), "an application (f a ...)")
        parts = [self.term(i, env) for i in it]
        return apps(parts[0], *parts[1:])

    # formulas
    def formula(self, x, env: dict) -> L.Formula:
        if isinstance(x, Sym):
            if x.text in ("F", "false"):
                return L.FALSITY
            raise ParseError(*_where(x), f"a formula, got {x.text!r}")
        h = _head(x)
        it = x.items
        if h == "atom":
            _arity(x, 2, "atom")
            return L.Atom(self.term(it[1], env))
        if h == "->":
            if len(it) < 3:
                raise ParseError(*_where(x), "(-> A B ...)")
            return L.implies(*(self.formula(i, env) for i in it[1:]))
        if h == "not":
            _arity(x, 2, "not")
            return L.neg(self.formula(it[1], env))
        if h in ("all", "exc"):
            _arity(x, 4, h)
            name = _sym(it[1], "a variable")
            ty = self.type(it[2])
            new = self._bind(name)
            self._scope_types[new] = ty
            body = self.formula(it[3], {**env, name: new})
            return L.Forall(new, ty, body) if h == "all" else L.exc(new, ty, body)
        raise ParseError(*_where(x), "a formula")

    # proofs
    def proof(self, x, env: dict, hyps: dict) -> L.Proof:
        h = _head(x)
        if h is None:
            raise ParseError(*_where(x), "a proof")
        it = x.items
        if h == "assume":
            _arity(x, 3, "assume")
            u = _sym(it[1], "an assumption name")
            return L.Assume(hyps.get(u, u), self.formula(it[2], env))
        if h == "imp-intro":
            _arity(x, 4, "imp-intro")
            u = _sym(it[1], "an assumption name")
            a = self.formula(it[2], env)
            new = self._bind(u)
            return L.ImpIntro(new, a, self.proof(it[3], env, {**hyps, u: new}))
        if h == "imp-elim":
            _arity(x, 3, "imp-elim")
            return L.ImpElim(self.proof(it[1], env, hyps), self.proof(it[2], env, hyps))
        if h == "all-intro":
            _arity(x, 4, "all-intro")
            name = _sym(it[1], "a variable")
            ty = self.type(it[2])
            new = self._bind(name)
            self._scope_types[new] = ty
            return L.AllIntro(new, ty, self.proof(it[3], {**env, name: new}, hyps))
        if h == "all-elim":
            _arity(x, 3, "all-elim")
            return L.AllElim(self.proof(it[1], env, hyps), self.term(it[2], env))
        if h == "truth":
            _arity(x, 1, "truth")
            return L.Truth()
        if h in ("cases", "ind"):
            _arity(x, 5 if h == "cases" else 7, h)
            mot = it[1]
            if not (isinstance(mot, SList) and len(mot.items) == 2):
                raise ParseError(*_where(mot), "a motive (x formula)")
            hv = _sym(mot.items[0], "a motive variable")
            hnew = self._bind(hv)
            self._scope_types[hnew] = BOOL if h == "cases" else NAT
            motive = self.formula(mot.items[1], {**env, hv: hnew})
            scrut = self.term(it[2], env)
            if h == "cases":
                return L.Cases(hnew, motive, scrut, self.proof(it[3], env, hyps),
                               self.proof(it[4], env, hyps))
            base = self.proof(it[3], env, hyps)
            k = _sym(it[4], "a step variable")
            u = _sym(it[5], "an induction hypothesis name")
            knew, unew = self._bind(k), self._bind(u)
            self._scope_types[knew] = NAT
            step = self.proof(it[6], {**env, k: knew}, {**hyps, u: unew})
            return L.Ind(hnew, motive, scrut, base, knew, unew, step)
        if h == "efq":
            _arity(x, 3, "efq")
            return L.efq_apply(self.formula(it[1], env), self.proof(it[2], env, hyps))
        if h == "stab":
            _arity(x, 2, "stab")
            return L.mk_stability(self.formula(it[1], env))
        raise ParseError(*_where(x), f"a proof form, got {h!r}")

    @property
    def _scope_types(self) -> dict:
        if not hasattr(self, "_types"):
            self._types = {}
        return self._types


@dataclass
class Document:
    """A parsed ``.naw`` file."""
    free: dict[str, TypeExpr] = field(default_factory=dict)
    proof: Optional[L.Proof] = None
    term: Optional[Term] = None


def parse_document(text: str) -> Document:
    forms = read_all(text)
    doc = Document()
    reader = Reader()
    main = None
    for f in forms:
        h = _head(f)
        if h == "var":
            _arity(f, 3, "var")
            name = _sym(f.items[1], "a variable name")
            if name in doc.free:
                raise DuplicateBinder(*_where(f), f"a fresh declaration, {name!r} declared twice")
            doc.free[name] = reader.type(f.items[2])
            reader.free[name] = doc.free[name]
            reader.used.add(name)
        elif h in ("proof", "term"):
            if main is not None:
                raise ParseError(*_where(f), "a single (proof ...) or (term ...) form")
            _arity(f, 2, h)
            main = (h, f.items[1])
        else:
            raise ParseError(*_where(f), "(var ...), (proof ...) or (term ...)")
    if main is None:
        raise ParseError(1, 1, "a (proof ...) or (term ...) form")
    if main[0] == "proof":
        doc.proof = reader.proof(main[1], {}, {})
    else:
        doc.term = reader.term(main[1], {})
    return doc


def _one(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(1, 1, "exactly one expression")
    return forms[0]


def parse_type(text: str) -> TypeExpr:
    return Reader().type(_one(text))


def parse_term(text: str, free: Optional[dict] = None) -> Term:
    return Reader(free).term(_one(text), {})


def parse_formula(text: str, free: Optional[dict] = None) -> L.Formula:
    return Reader(free).formula(_one(text), {})


def parse_proof(text: str, free: Optional[dict] = None) -> L.Proof:
    return Reader(free).proof(_one(text), {}, {})


def parse_proof_file(path) -> L.Proof:
    with open(path) as fh:
        doc = parse_document(fh.read())
    if doc.proof is None:
        raise ParseError(1, 1, "a (proof ...) form")
    return doc.proof


# --------------------------------------------------------------------------
# printer

def show_type(t: TypeExpr) -> str:
    return str(t)


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, EpsTerm):
        return "eps"
    if isinstance(t, Lit):
        return f"(lit {t.value!r})"
    n = numeral_value(t)
    if n is not None:
        return str(n)
    if isinstance(t, Const):
        if t.sigma is not None:
            return f"({t.name}@ {t.sigma})"
        return t.name
    if isinstance(t, Lam):
        return f"(lam ({t.name} {t.vtype}) {show_term(t.body)})"
    if isinstance(t, Pair):
        return f"(pair {show_term(t.left)} {show_term(t.right)})"
    if isinstance(t, Fst):
        return f"(fst {show_term(t.arg)})"
    if isinstance(t, Snd):
        return f"(snd {show_term(t.arg)})"
    if isinstance(t, Check):
        return f"(check {t.label} {show_term(t.body)})"
    if isinstance(t, App) and isinstance(t.fn, Lam) and t.fn.vtype == t.arg.ty:
        return f"(let ({t.fn.name} {show_term(t.arg)}) {show_term(t.fn.body)})"
    head, elims = spine(t)
    args = []
    for e in elims:
        if e[0] != "app":
            break
        args.append(e[1])
    full = {"if": 3, "rec": 3, "mcase": 4}
    if isinstance(head, Const) and head.name in full and len(args) >= full[head.name]:
        k = full[head.name]
        core = f"({head.name} {' '.join(show_term(a) for a in args[:k])})"
        rest = args[k:]
        return f"({core} {' '.join(show_term(a) for a in rest)})" if rest else core
    if isinstance(head, Const) and head.name == "succ" and len(args) == 1:
        return f"(succ {show_term(args[0])})"
    parts = []
    while isinstance(t, App):
        parts.append(t.arg)
        t = t.fn
    parts.append(t)
    return "(" + " ".join(show_term(p) for p in reversed(parts)) + ")"


def show_formula(a: L.Formula) -> str:
    if isinstance(a, L.Atom):
        if a.term == FF:
            return "F"
        return f"(atom {show_term(a.term)})"
    if isinstance(a, L.Implies):
        return f"(-> {show_formula(a.left)} {show_formula(a.right)})"
    return f"(all {a.var} {a.vtype} {show_formula(a.body)})"


def show_proof(p: L.Proof) -> str:
    if isinstance(p, L.Assume):
        return f"(assume {p.name} {show_formula(p.formula)})"
    if isinstance(p, L.ImpIntro):
        return f"(imp-intro {p.name} {show_formula(p.formula)} {show_proof(p.body)})"
    if isinstance(p, L.ImpElim):
        return f"(imp-elim {show_proof(p.fn)} {show_proof(p.arg)})"
    if isinstance(p, L.AllIntro):
        return f"(all-intro {p.var} {p.vtype} {show_proof(p.body)})"
    if isinstance(p, L.AllElim):
        return f"(all-elim {show_proof(p.fn)} {show_term(p.term)})"
    if isinstance(p, L.Truth):
        return "(truth)"
    if isinstance(p, L.Cases):
        return (f"(cases ({p.hole} {show_formula(p.motive)}) {show_term(p.scrutinee)} "
                f"{show_proof(p.if_tt)} {show_proof(p.if_ff)})")
    if isinstance(p, L.Ind):
        return (f"(ind ({p.hole} {show_formula(p.motive)}) {show_term(p.scrutinee)} "
                f"{show_proof(p.base)} {p.step_var} {p.ih} {show_proof(p.step)})")
    raise TypeError(p)


def show_document(doc: Document) -> str:
    lines = [f"(var {k} {v})" for k, v in doc.free.items()]
    if doc.proof is not None:
        lines.append(f"(proof {show_proof(doc.proof)})")
    else:
        lines.append(f"(term {show_term(doc.term)})")
    return "\n".join(lines) + "\n"
