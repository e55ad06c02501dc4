"""Generated proof families used for size measurements."""
from __future__ import annotations

from .logic import Assume, Atom, Forall, ImpElim, ImpIntro, Proof, implies, neg
from .terms import App, Var
from .types import BOOL, NAT, Arrow

F_TYPE = Arrow(NAT, BOOL)
FAMILY_FREE = {"f": F_TYPE}


def classical_exists_f():
    """``not forall k. not at(f k)`` over a free ``f : nat => bool``."""
    k = Var("k", NAT)
    return neg(Forall("k", NAT, neg(Atom(App(Var("f", F_TYPE), k)))))


def application_chain(n: int) -> Proof:
    """``lam u. (lam v_n. v_n) (... ((lam v_1. v_1) u))``.

    Each link is a closed lemma applied to the previous result, so at most
    two assumptions are open anywhere.
    """
    a = classical_exists_f()
    body: Proof = Assume("u", a)
    for i in range(n):
        v = f"v{i}"
        body = ImpElim(ImpIntro(v, a, Assume(v, a)), body)
    return ImpIntro("u", a, body)


def shared_chain(n: int) -> Proof:
    """``lam u. g (g (... (g u)))`` with ``n`` uses of one open ``g : A -> A``.

    The ``n - 1`` contractions on ``g`` make extracted size affine in ``n``
    with a negative offset.
    """
    a = classical_exists_f()
    g = Assume("g", implies(a, a))
    body: Proof = Assume("u", a)
    for _ in range(n):
        body = ImpElim(g, body)
    return ImpIntro("u", a, body)
