"""Object-language types: Goedel's T over bool/nat plus a three-valued marker type.

``EPS`` is the nulltype. The smart constructors :func:`arrow` and :func:`prod`
apply the nulltype simplifications, so a type built through them never holds
``EPS`` below its root.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Base:
    name: str  # "bool" | "nat" | "mark"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TypeVar:
    name: str

    def __str__(self) -> str:
        return "'" + self.name


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"

    def __str__(self) -> str:
        return f"(-> {self.dom} {self.cod})"


@dataclass(frozen=True)
class Prod:
    left: "TypeExpr"
    right: "TypeExpr"

    def __str__(self) -> str:
        return f"(* {self.left} {self.right})"


@dataclass(frozen=True)
class Epsilon:
    def __str__(self) -> str:
        return "eps"


@dataclass(frozen=True)
class HoleType:
    def __str__(self) -> str:
        return "hole"


TypeExpr = Union[Base, TypeVar, Arrow, Prod, Epsilon, HoleType]

BOOL = Base("bool")
NAT = Base("nat")
MARK = Base("mark")
EPS = Epsilon()
HOLE = HoleType()


def arrow(dom: TypeExpr, cod: TypeExpr) -> TypeExpr:
    if cod == EPS:
        return EPS
    if dom == EPS:
        return cod
    return Arrow(dom, cod)


def prod(left: TypeExpr, right: TypeExpr) -> TypeExpr:
    if right == EPS:
        return left
    if left == EPS:
        return right
    return Prod(left, right)


def arrows(*tys: TypeExpr) -> TypeExpr:
    """Right-nested arrow ``t1 => t2 => ... => tn`` (no simplification)."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def simplify_type(ty: TypeExpr) -> TypeExpr:
    """Exhaustively apply the nulltype rules for types."""
    if isinstance(ty, Arrow):
        return arrow(simplify_type(ty.dom), simplify_type(ty.cod))
    if isinstance(ty, Prod):
        return prod(simplify_type(ty.left), simplify_type(ty.right))
    return ty


def contains_eps(ty: TypeExpr) -> bool:
    if ty == EPS:
        return True
    if isinstance(ty, Arrow):
        return contains_eps(ty.dom) or contains_eps(ty.cod)
    if isinstance(ty, Prod):
        return contains_eps(ty.left) or contains_eps(ty.right)
    return False


def contains_hole(ty: TypeExpr) -> bool:
    if ty == HOLE:
        return True
    if isinstance(ty, Arrow):
        return contains_hole(ty.dom) or contains_hole(ty.cod)
    if isinstance(ty, Prod):
        return contains_hole(ty.left) or contains_hole(ty.right)
    return False


def type_vars(ty: TypeExpr) -> set[str]:
    if isinstance(ty, TypeVar):
        return {ty.name}
    if isinstance(ty, Arrow):
        return type_vars(ty.dom) | type_vars(ty.cod)
    if isinstance(ty, Prod):
        return type_vars(ty.left) | type_vars(ty.right)
    return set()
