import random

import pytest

from gen import random_formula
from negarith.logic import (
    FALSITY, TRUTH, AllElim, AllIntro, Assume, AssumptionTypeClash, Atom, Cases, ConclusionMismatch,
    EigenvariableViolation, Forall, ImpElim, ImpIntro, Implies, Ind, ProofError, Truth, check_proof,
    fa, formula_eq, fv, mk_efq, mk_stability, msl, neg, proof_children, proof_size, subst_proof,
)
from negarith.runtime.corpus import corpus
from negarith.terms import TT, App, Lam, Var, numeral
from negarith.types import BOOL, NAT, Arrow

F = Var("f", Arrow(NAT, BOOL))
A = Forall("k", NAT, Atom(App(F, Var("k", NAT))))


def test_identity():
    p = ImpIntro("u", A, Assume("u", A))
    assert formula_eq(check_proof(p), Implies(A, A))


def test_truth():
    assert check_proof(Truth()) == Atom(TT)


def test_eigenvariable_condition():
    x = Var("x", NAT)
    c = Atom(App(F, x))
    with pytest.raises(EigenvariableViolation):
        check_proof(AllIntro("x", NAT, Assume("u", c)))


def test_eigenvariable_ok_when_discharged():
    x = Var("x", NAT)
    c = Atom(App(F, x))
    out = check_proof(AllIntro("x", NAT, ImpIntro("u", c, Assume("u", c))))
    assert isinstance(out, Forall)


def test_assumption_clash():
    p = ImpElim(Assume("u", Implies(A, A)), Assume("u", A))
    with pytest.raises(AssumptionTypeClash):
        check_proof(p)


def test_modus_ponens_mismatch():
    b = Atom(App(F, numeral(1)))
    with pytest.raises(ConclusionMismatch):
        check_proof(ImpElim(Assume("u", Implies(A, b)), Assume("v", b)))


def test_all_elim_up_to_r_equality():
    # (lam z. z) 2 and 2 are r-equal, so the instance matches
    two = App(Lam("z", NAT, Var("z", NAT)), numeral(2))
    p = AllElim(Assume("u", A), two)
    target = Atom(App(F, numeral(2)))
    assert formula_eq(check_proof(p), target)


def test_cases_and_induction_conclusions():
    b = Var("b", BOOL)
    motive = Atom(b)
    p = Cases("b", motive, TT, Truth(), Assume("w", FALSITY))
    assert check_proof(p) == Atom(TT)
    n = Var("n", NAT)
    ind = Ind("m", TRUTH, n, Truth(), "j", "v", Truth())
    assert check_proof(ind) == TRUTH


def test_fa_and_msl():
    assert msl(Assume("u", A)) == 1
    assert msl(ImpIntro("u", A, Assume("u", A))) == 1
    app = ImpElim(Assume("g", Implies(A, A)), Assume("u", A))
    assert msl(app) == 2
    assert set(fa(app)) == {"g", "u"}
    assert fa(ImpIntro("u", A, Assume("u", A))) == {}


def test_fv():
    p = AllElim(Assume("u", A), Var("m", NAT))
    assert {"f", "m"} <= set(fv(p))


def test_proof_size_counts_embedded_terms():
    p = AllElim(Assume("u", A), numeral(2))
    assert proof_size(p) == 2 + 5


def test_efq_examples():
    assert formula_eq(check_proof(mk_efq(Atom(TT))), Implies(FALSITY, Atom(TT)))
    n = Var("n", NAT)
    refl = Forall("n", NAT, Atom(App(App(Var("eq", Arrow(NAT, Arrow(NAT, BOOL))), n), n)))
    assert formula_eq(check_proof(mk_efq(refl)), Implies(FALSITY, refl))
    imp = Implies(A, Atom(App(F, numeral(0))))
    assert formula_eq(check_proof(mk_efq(imp)), Implies(FALSITY, imp))


@pytest.mark.parametrize("seed", range(20))
def test_efq_and_stability_on_random_formulas(seed):
    a = random_formula(random.Random(seed), 4)
    assert formula_eq(check_proof(mk_efq(a)), Implies(FALSITY, a))
    assert formula_eq(check_proof(mk_stability(a)), Implies(neg(neg(a)), a))


def test_substitution_lemma():
    rng = random.Random(3)
    for _ in range(20):
        c = random_formula(rng, 2)
        # P : C -> C with u open is (lam w. u)-style weakening; N proves C from F
        p = ImpIntro("w", c, Assume("u", c))
        n = ImpElim(mk_efq(c), Assume("z", FALSITY))
        before = check_proof(p)
        after = check_proof(subst_proof(p, "u", n))
        assert formula_eq(before, after)
        assert "u" not in fa(subst_proof(p, "u", n))


def _mutations(p):
    """Single-node changes: a different instance in one universal elimination."""
    if isinstance(p, AllElim):
        yield AllElim(p.fn, numeral(7) if p.term != numeral(7) else numeral(8))
    kids = proof_children(p)
    for i, k in enumerate(kids):
        for m in _mutations(k):
            yield _replace_child(p, i, m)


def _replace_child(p, i, new):
    if isinstance(p, ImpIntro):
        return ImpIntro(p.name, p.formula, new)
    if isinstance(p, ImpElim):
        return ImpElim(new, p.arg) if i == 0 else ImpElim(p.fn, new)
    if isinstance(p, AllIntro):
        return AllIntro(p.var, p.vtype, new)
    if isinstance(p, AllElim):
        return AllElim(new, p.term)
    if isinstance(p, Cases):
        return Cases(p.hole, p.motive, p.scrutinee, new, p.if_ff) if i == 0 else \
            Cases(p.hole, p.motive, p.scrutinee, p.if_tt, new)
    if isinstance(p, Ind):
        return Ind(p.hole, p.motive, p.scrutinee, new, p.step_var, p.ih, p.step) if i == 0 else \
            Ind(p.hole, p.motive, p.scrutinee, p.base, p.step_var, p.ih, new)
    raise AssertionError(p)


def test_mutations_are_rejected_or_change_the_conclusion():
    seen = 0
    for e in corpus():
        original = check_proof(e.proof)
        for m in _mutations(e.proof):
            seen += 1
            try:
                out = check_proof(m)
            except ProofError:
                continue
            assert not formula_eq(out, original) or fa(m) != fa(e.proof)
    assert seen > 10
