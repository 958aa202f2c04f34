"""Parabolic subgroups g G_S g^-1 and the basic toolkit around them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import GraphMismatch, PreconditionFailed
from .graph import ArtinGraph
from .word_problem import in_standard_parabolic, is_equal
from .words import IDENTITY, Word, format_word, require_letters, retraction_image

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParabolicSubgroup:
    """g G_S g^-1, stored with ρ_S(g) = 1 so equal inputs print the same way."""

    graph: ArtinGraph = field(compare=True, repr=False)
    conjugator: Word = IDENTITY
    support: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        support = self.graph.require_all(self.support)
        require_letters(self.graph, self.conjugator)
        g = self.conjugator * ~retraction_image(self.conjugator, support)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "conjugator", g)

    @classmethod
    def standard(cls, graph: ArtinGraph, support: Iterable[str]) -> ParabolicSubgroup:
        return cls(graph, IDENTITY, frozenset(support))

    @property
    def is_trivial(self) -> bool:
        return not self.support

    def generators(self) -> list[Word]:
        g = self.conjugator
        return [Word.gen(s).conjugate(g) for s in sorted(self.support)]

    def as_dict(self) -> dict[str, Any]:
        return {"conjugator": format_word(self.conjugator), "support": sorted(self.support)}

    def __str__(self) -> str:
        return f"({format_word(self.conjugator)}) G_{{{','.join(sorted(self.support))}}}"


def same_graph(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> ArtinGraph:
    if P.graph != Q.graph:
        raise GraphMismatch("parabolic subgroups live in different Artin groups")
    return P.graph


def member(P: ParabolicSubgroup, w: Word) -> bool:
    require_letters(P.graph, w)
    g = P.conjugator
    return in_standard_parabolic(P.graph, ~g * w * g, P.support)


def standard_intersection(A: Iterable[str], B: Iterable[str]) -> frozenset[str]:
    return frozenset(A) & frozenset(B)


def common_support_reduction(
    f: Word, A: Iterable[str], g: Word, B: Iterable[str]
) -> tuple[Word, Word, frozenset[str]]:
    """Rewrite fG_Af^-1 ∩ gG_Bg^-1 as f'G_Cf'^-1 ∩ g'G_Cg'^-1 with C = A ∩ B."""
    A, B = frozenset(A), frozenset(B)
    h = ~f * g
    a = retraction_image(h, A)
    b = retraction_image(~h * a, B)
    return f * a, g * b, standard_intersection(A, B)


def contains(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> bool:
    same_graph(P, Q)
    return all(member(P, q) for q in Q.generators())


def equal(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> bool:
    same_graph(P, Q)
    if P.support != Q.support:
        return False
    if is_equal(P.graph, P.conjugator, Q.conjugator):
        return True
    # one inclusion is enough once the supports agree
    return contains(P, Q)


def proper_containment_support_check(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> bool:
    """True when Q is a proper subgroup of P; then the support of Q must shrink."""
    if not contains(P, Q) or equal(P, Q):
        return False
    if not Q.support < P.support:
        raise RuntimeError(f"proper containment {Q} < {P} without a smaller support")
    return True


def subgraph_transport(
    delta: ArtinGraph,
    t: Word,
    A: Iterable[str],
    g: Word,
    *,
    ambient: ArtinGraph | None = None,
    check: bool = True,
) -> Word:
    """Re-pose G_A ∩ gG_Ag^-1 inside G_Δ, given G_A ∪ gG_Ag^-1 ⊆ tG_Δt^-1."""
    parent = ambient if ambient is not None else (delta.parent if delta.parent is not None else delta)
    A = delta.require_all(A)
    keep = delta.vertex_set
    if check:
        around = ParabolicSubgroup(parent, t, keep)
        for s in sorted(A):
            a = Word.gen(s)
            if not member(around, a) or not member(around, a.conjugate(g)):
                raise PreconditionFailed(f"G_A and its conjugate are not inside the given conjugate of G_Δ ({s})")
    f1 = retraction_image(~t, keep)
    f2 = retraction_image(~t * g, keep)
    h = ~f1 * f2
    log.debug("transport to %d-vertex subgraph, |h| = %d", len(delta), len(h))
    return h
