"""The bundled proof corpus."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from ..dialectica import tau
from ..logic import Assume, Formula, Ind, Proof, check_proof, fa, proof_children
from ..sexpr import Document, parse_document
from ..types import EPS, Arrow, Prod, TypeExpr

# name -> ((plain tau+, plain tau-), (marked tau+, marked tau-)), as printed
_EXPECTED_TAUS = {
    "identity": (("(* nat nat)", "(* (-> nat nat) nat)"),
                 ("(* (* mark nat) (* mark nat))", "(* (-> nat (* mark nat)) nat)")),
    "weakening": (("(* (* nat nat) nat)", "(* (-> nat nat) nat)"),
                  ("(* (* (* mark nat) (* mark nat)) (* mark nat))",
                   "(* (-> nat (* mark nat)) nat)")),
    "contraction": (("nat", "eps"), ("(* mark nat)", "eps")),
    "double_use": (("nat", "eps"), ("(* mark (* nat mark))", "(-> (* nat mark) mark)")),
    "linear_search": (("nat", "eps"), ("(* mark nat)", "eps")),
    "cases": (("(* nat nat)", "eps"), ("(* (* mark nat) (* mark nat))", "eps")),
    "higher_order": (("(-> nat nat)", "(-> (-> nat nat) nat)"),
                     ("(* mark (-> nat (* mark nat)))",
                      "(-> (-> nat (* mark nat)) (* mark nat))")),
    "nested_induction": (("eps", "nat"), ("mark", "nat")),
}


@dataclass(eq=False)
class CorpusEntry:
    name: str
    path: Path
    tags: frozenset = field(default_factory=frozenset)
    expected_taus: Optional[tuple] = None

    @cached_property
    def document(self) -> Document:
        return parse_document(self.path.read_text())

    @property
    def proof(self) -> Proof:
        return self.document.proof

    @property
    def free(self) -> dict[str, TypeExpr]:
        return self.document.free

    @cached_property
    def conclusion(self) -> Formula:
        return check_proof(self.proof)


def _has_order_two(ty: TypeExpr) -> bool:
    if isinstance(ty, Arrow):
        return True
    if isinstance(ty, Prod):
        return _has_order_two(ty.left) or _has_order_two(ty.right)
    return False


def _assumption_uses(p: Proof, out: dict) -> dict:
    if isinstance(p, Assume):
        out[p.name] = out.get(p.name, 0) + 1
    for c in proof_children(p):
        _assumption_uses(c, out)
    return out


def _has_ind(p: Proof) -> bool:
    return isinstance(p, Ind) or any(_has_ind(c) for c in proof_children(p))


def structural_tags(p: Proof) -> frozenset:
    a = check_proof(p)
    tags = set()
    if any(n > 1 for n in _assumption_uses(p, {}).values()):
        tags.add("uses-contraction")
    if _has_ind(p):
        tags.add("nat-induction")
    if tau(a).minus == EPS:
        tags.add("tau-minus-eps")
    if any(_has_order_two(tau(a, m).minus) for m in (False, True)):
        tags.add("higher-order-challenge")
    if fa(p):
        tags.add("open-assumptions")
    return frozenset(tags)


def corpus_dir() -> Path:
    return Path(str(resources.files("negarith") / "corpus"))


@lru_cache(maxsize=None)
def corpus() -> tuple[CorpusEntry, ...]:
    out = []
    for path in sorted(corpus_dir().glob("*.naw")):
        e = CorpusEntry(path.stem, path, expected_taus=_EXPECTED_TAUS.get(path.stem))
        e.tags = structural_tags(e.proof)
        out.append(e)
    return tuple(out)


def entry(name: str) -> CorpusEntry:
    for e in corpus():
        if e.name == name:
            return e
    raise KeyError(f"no corpus entry named {name!r}")
