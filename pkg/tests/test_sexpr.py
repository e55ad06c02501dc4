import pytest

from negarith.logic import FALSITY, Implies, ImpIntro, Truth, check_proof, formula_eq
from negarith.runtime.corpus import corpus
from negarith.sexpr import (
    DuplicateBinder, ParseError, parse_document, parse_formula, parse_proof, parse_term,
    parse_type, show_document, show_formula, show_proof, show_term, show_type,
)
from negarith.terms import alpha_eq, infer_type, normalize, numeral_value
from negarith.types import BOOL, NAT, Arrow, Prod


def test_truth():
    assert parse_proof("(truth)") == Truth()


def test_identity_on_falsity():
    p = parse_proof("(imp-intro u (atom ff) (assume u (atom ff)))")
    assert isinstance(p, ImpIntro)
    assert check_proof(p) == Implies(FALSITY, FALSITY)


def test_arity_error():
    with pytest.raises(ParseError) as e:
        parse_proof("(imp-elim (truth))")
    assert e.value.line == 1


def test_unbalanced_parens():
    with pytest.raises(ParseError):
        parse_proof("(imp-intro u (atom ff) (assume u (atom ff))")


def test_duplicate_declaration():
    with pytest.raises(DuplicateBinder):
        parse_document("(var f nat) (var f nat) (proof (truth))")


def test_types():
    assert parse_type("(-> nat bool)") == Arrow(NAT, BOOL)
    assert parse_type("(* nat bool)") == Prod(NAT, BOOL)
    assert show_type(parse_type("(-> (* nat mark) bool)")) == "(-> (* nat mark) bool)"


def test_terms_evaluate():
    t = parse_term("(rec 2 0 (lam (k nat) (lam (p nat) (succ p))))")
    assert numeral_value(normalize(t)) == 2
    assert infer_type(parse_term("(lam (x nat) (succ x))")) == Arrow(NAT, NAT)


def test_sugar():
    f = {"f": Arrow(NAT, BOOL)}
    a = parse_formula("(not (atom (f 0)))", f)
    assert isinstance(a, Implies) and a.right == FALSITY
    e = parse_formula("(exc k nat (atom (f k)))", f)
    assert show_formula(e).startswith("(-> (all k nat (-> (atom (f k)) F)) F)")


@pytest.mark.parametrize("entry", corpus(), ids=lambda e: e.name)
def test_corpus_round_trip(entry):
    doc = entry.document
    again = parse_document(show_document(doc))
    assert formula_eq(check_proof(again.proof), check_proof(doc.proof))
    assert show_proof(again.proof) == show_proof(doc.proof)


def test_term_round_trip():
    src = "(lam (x nat) (pair (succ x) (if (meq mtt mbot) tt ff)))"
    t = parse_term(src)
    assert alpha_eq(parse_term(show_term(t)), t)
