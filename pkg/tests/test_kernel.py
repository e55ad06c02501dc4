import random

import pytest
from hypothesis import given, settings, strategies as st

from gen import eps_term, random_terms, random_type
from negarith.terms import (
    EPS_T, FF, MBOT, MFF, MTT, SUCC, TT, ZERO, App, Check, Fst, FuelExhausted, Lam, Pair,
    Snd, TypeMismatch, UnboundVariable, Var, alpha_eq, apps, canonical_inhabitant,
    epsilon_simplify_term, epsilon_simplify_type, eta_long, if_then_else, infer_type, let,
    mark_eq, mcase_const, normalize, normalize_by_steps, numeral, numeral_value, r_equal, rec,
    rec_const, reduce_step, subst, term_size,
)
from negarith.types import BOOL, EPS, MARK, NAT, Arrow, Prod, TypeVar, arrow, prod

N2N = Arrow(NAT, NAT)
G = Var("g", N2N)


def succ(t):
    return App(SUCC, t)


def plus_one_step():
    return Lam("k", NAT, Lam("p", NAT, succ(Var("p", NAT))))


# typing --------------------------------------------------------------------

def test_pair_typing():
    assert infer_type(Pair(ZERO, TT)) == Prod(NAT, BOOL)


def test_recursor_signature():
    assert infer_type(rec_const(BOOL)) == Arrow(NAT, Arrow(BOOL, Arrow(Arrow(NAT, Arrow(BOOL, BOOL)), BOOL)))


def test_applying_a_boolean_is_rejected():
    with pytest.raises(TypeMismatch):
        infer_type(App(TT, ZERO))


def test_argument_mismatch_is_rejected():
    with pytest.raises(TypeMismatch):
        infer_type(App(SUCC, TT))


def test_unbound_variable_with_context():
    with pytest.raises(UnboundVariable):
        infer_type(Var("z", NAT), {})
    assert infer_type(Var("z", NAT), {"z": NAT}) == NAT


def test_marker_constants():
    assert infer_type(mark_eq(MTT, MBOT)) == BOOL
    assert infer_type(apps(mcase_const(NAT), MFF, ZERO, numeral(1), numeral(2))) == NAT


# reduction -----------------------------------------------------------------

def test_rec_zero_step():
    s, t = numeral(5), plus_one_step()
    assert reduce_step(rec(ZERO, s, t)) == s


def test_rec_succ_step():
    n, s, t = Var("n", NAT), ZERO, plus_one_step()
    out = reduce_step(rec(succ(n), s, t))
    assert out == apps(t, n, rec(n, s, t))


def test_pair_projection():
    a, b = Var("a", NAT), Var("b", BOOL)
    assert reduce_step(Fst(Pair(a, b))) == a
    assert reduce_step(Snd(Pair(a, b))) == b


def test_beta():
    assert normalize(App(Lam("x", NAT, Var("x", NAT)), ZERO)) == ZERO


def test_rec_two():
    assert normalize(rec(numeral(2), ZERO, plus_one_step())) == numeral(2)


def test_if_and_marker_rules():
    assert normalize(if_then_else(TT, numeral(1), numeral(2))) == numeral(1)
    assert normalize(if_then_else(FF, numeral(1), numeral(2))) == numeral(2)
    assert normalize(mark_eq(MFF, MFF)) == TT
    assert normalize(mark_eq(MFF, MTT)) == FF
    for m, want in ((MTT, 0), (MFF, 1), (MBOT, 2)):
        t = apps(mcase_const(NAT), m, numeral(0), numeral(1), numeral(2))
        assert numeral_value(normalize(t)) == want


def test_check_tag_is_transparent():
    assert normalize(Check("c", if_then_else(TT, FF, TT))) == FF


def test_normal_forms_are_fixed_points():
    assert reduce_step(Var("x", NAT)) is None
    assert reduce_step(App(G, ZERO)) is None


def test_fuel_guard():
    t = rec(numeral(40), ZERO, Lam("k", NAT, Lam("p", NAT, succ(succ(Var("p", NAT))))))
    with pytest.raises(FuelExhausted):
        normalize_by_steps(t, fuel=5)


def test_reduction_under_binders():
    t = Lam("y", NAT, App(Lam("x", NAT, succ(Var("x", NAT))), Var("y", NAT)))
    assert normalize(t) == Lam("y", NAT, succ(Var("y", NAT)))


# eta / r-equality ----------------------------------------------------------

def test_eta_long_arrow():
    out = eta_long(G, N2N)
    assert isinstance(out, Lam) and out.body == App(G, Var(out.name, NAT))


def test_eta_long_product():
    p = Var("p", Prod(NAT, BOOL))
    assert eta_long(p) == Pair(Fst(p), Snd(p))


def test_eta_long_base_fixed():
    assert eta_long(ZERO, NAT) == ZERO


def test_r_equal_eta_and_beta():
    assert r_equal(G, Lam("x", NAT, App(G, Var("x", NAT))))
    p = Var("p", Prod(NAT, BOOL))
    assert r_equal(p, Pair(Fst(p), Snd(p)))
    assert not r_equal(numeral(1), numeral(2))


def test_capture_free_substitution():
    # (lam y. x) [x := y] must not capture the free y
    t = Lam("y", NAT, Var("x", NAT))
    out = subst(t, "x", Var("y", NAT))
    assert isinstance(out, Lam) and out.name != "y" and out.body == Var("y", NAT)


# sizes and inhabitants -----------------------------------------------------

def test_size_ignores_nulltype_and_tags():
    assert term_size(EPS_T) == 0
    assert term_size(Check("c", ZERO)) == 1
    assert term_size(succ(ZERO)) == 3


def test_canonical_inhabitants():
    assert canonical_inhabitant(NAT) == ZERO
    assert canonical_inhabitant(BOOL) == FF
    assert canonical_inhabitant(MARK) == MBOT
    f = canonical_inhabitant(Arrow(NAT, BOOL))
    assert isinstance(f, Lam) and f.body == FF
    d = canonical_inhabitant(TypeVar("a"))
    assert d == Var("default_a", TypeVar("a"))


# nulltype table ------------------------------------------------------------

X = Var("x", NAT)
E_VAR = Var("e", EPS)


@pytest.mark.parametrize("before,after", [
    (Prod(NAT, EPS), NAT),
    (Prod(EPS, NAT), NAT),
    (Arrow(NAT, EPS), EPS),
    (Arrow(EPS, NAT), NAT),
])
def test_eps_type_rules(before, after):
    assert epsilon_simplify_type(before) == after


def test_marker_with_nulltype_collapses():
    assert prod(MARK, EPS) == MARK and arrow(EPS, MARK) == MARK


def test_eps_fst_of_nat_times_eps():
    assert epsilon_simplify_term(Fst(Var("p", Prod(NAT, EPS)))) == Var("p", NAT)


def test_eps_snd_of_eps_times_nat():
    assert epsilon_simplify_term(Snd(Var("p", Prod(EPS, NAT)))) == Var("p", NAT)


def test_eps_pair_right():
    assert epsilon_simplify_term(Pair(X, E_VAR)) == X


def test_eps_pair_left():
    assert epsilon_simplify_term(Pair(E_VAR, X)) == X


def test_eps_lambda_with_nulltype_body():
    assert epsilon_simplify_term(Lam("y", NAT, E_VAR)) == EPS_T


def test_eps_lambda_over_nulltype_binder():
    assert epsilon_simplify_term(Lam("y", EPS, X)) == X


def test_eps_application_of_nulltype():
    assert epsilon_simplify_term(App(Var("h", Arrow(NAT, EPS)), X)) == EPS_T


def test_eps_application_to_nulltype():
    assert epsilon_simplify_term(App(Var("h", Arrow(EPS, NAT)), E_VAR)) == Var("h", NAT)


def _contains_eps(ty):
    if ty == EPS:
        return True
    if isinstance(ty, (Arrow, Prod)):
        a, b = (ty.dom, ty.cod) if isinstance(ty, Arrow) else (ty.left, ty.right)
        return _contains_eps(a) or _contains_eps(b)
    return False


def test_eps_simplification_is_total_on_random_types():
    rng = random.Random(7)
    for _ in range(1000):
        ty = random_type(rng, 3, eps=True)
        s = epsilon_simplify_type(ty)
        assert s == EPS or not _contains_eps(s)
        assert epsilon_simplify_type(s) == s


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_eps_congruence(seed):
    rng = random.Random(seed)
    ty = random_type(rng, 2, eps=True)
    t = eps_term(rng, ty, 4)
    assert epsilon_simplify_type(infer_type(t)) == infer_type(epsilon_simplify_term(t))


# random-term properties (a smaller slice; the full run is an acceptance check)

@pytest.fixture(scope="module")
def terms():
    return random_terms(11, 1500, free={"g": N2N})


def test_subject_reduction(terms):
    for t in terms:
        ty = infer_type(t)
        cur, steps = t, 0
        while (nxt := reduce_step(cur)) is not None and steps < 200:
            assert infer_type(nxt) == ty
            cur, steps = nxt, steps + 1


def test_normalization_idempotent_and_confluent(terms):
    for t in terms:
        n = normalize(t)
        assert reduce_step(n) is None
        assert alpha_eq(normalize(n), n)
        assert alpha_eq(normalize_by_steps(t, innermost=True), n)


def test_r_equal_is_an_equivalence(terms):
    sample = terms[:200]
    for a in sample[:20]:
        assert r_equal(a, a)
    for a, b in zip(sample, sample[1:]):
        if a.ty == b.ty:
            assert r_equal(a, b) == r_equal(b, a)


def test_r_equal_respects_substitution():
    body = Lam("y", NAT, apps(rec_const(NAT), Var("x", NAT), Var("y", NAT), plus_one_step()))
    s1 = App(Lam("z", NAT, succ(Var("z", NAT))), ZERO)
    s2 = numeral(1)
    assert r_equal(s1, s2)
    assert r_equal(subst(body, "x", s1), subst(body, "x", s2))


def test_let_is_a_redex():
    t = let("z", numeral(2), App(G, Var("z", NAT)))
    assert normalize(t) == App(G, numeral(2))


def test_numerals():
    assert numeral_value(numeral(4)) == 4
    assert numeral_value(G) is None
