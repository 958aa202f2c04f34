"""Intersections of parabolic subgroups.

`intersect` first rewrites both inputs over a common support A, which leaves
G_A ∩ gG_Ag^-1.  `reduce_outcome` decides whether that is all of G_A or names
a parabolic over a smaller support containing it; in the latter case the
intersection is rebuilt from intersections over that smaller support.
"""

from __future__ import annotations

import enum
import functools
import logging
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence, Union

from .errors import ArtinError, GraphMismatch, PreconditionFailed
from .graph import ArtinGraph, induced_subgraph
from .kernels import (
    SIGMA_CONJUGATION_SIGN,
    KernelContext,
    index_parabolic_to_base,
    indexed_name,
    kernel_embed,
    kernel_rewrite,
    phi_map,
    split_indexed,
    vertex_kernel_graph,
    window_graph,
)
from .parabolic import (
    ParabolicSubgroup,
    common_support_reduction,
    equal,
    member,
    proper_containment_support_check,
    same_graph,
    subgraph_transport,
)
from .word_problem import amalgam_reduce, in_standard_parabolic
from .words import IDENTITY, Word, apply_map, exponent_sum, format_word, parse_word, require_letters, retraction_image

log = logging.getLogger(__name__)

Trace = list  # list of dicts: rule, support, conjugator, detail


class CyclicVerdict(str, enum.Enum):
    FULL = "full"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class Equal:
    """G_A = gG_Ag^-1."""

    def as_dict(self) -> dict[str, Any]:
        return {"outcome": "equal"}


@dataclass(frozen=True)
class ContainedIn:
    """G_A ∩ gG_Ag^-1 ⊆ dG_Bd^-1 for a proper subset B of A."""

    conjugator: Word
    support: frozenset[str]

    def as_dict(self) -> dict[str, Any]:
        return {"outcome": "contained", "conjugator": format_word(self.conjugator), "support": sorted(self.support)}


IntersectionOutcome = Union[Equal, ContainedIn]


def _note(trace: Optional[Trace], rule: str, support: Iterable[str], conjugator: Word, **detail: Any) -> None:
    log.debug("%s: support=%s conjugator=%s %s", rule, sorted(support), format_word(conjugator), detail or "")
    if trace is not None:
        trace.append(
            {"rule": rule, "support": sorted(support), "conjugator": format_word(conjugator), "detail": detail}
        )


def _lift(ctx: KernelContext, conj: Word, support: Iterable[str]) -> ContainedIn:
    """A Δ-parabolic over index level 0, read as a witness over the base graph."""
    P = index_parabolic_to_base(ctx, conj, support)
    return ContainedIn(P.conjugator, P.support)


def _big_edges_across(graph: ArtinGraph, A: frozenset[str]) -> list[tuple[str, str]]:
    """Pairs (y, a), y outside A and a in A, joined by a label > 2; sorted."""
    return [
        (y, a)
        for y in graph.vertices
        if y not in A
        for a in sorted(A)
        if (graph.label(y, a) or 0) > 2
    ]


@functools.lru_cache(maxsize=64)
def _dihedral_graph(a: str, x: str, k: int) -> ArtinGraph:
    return ArtinGraph.build([a, x], [(a, x, 2 * k)])


def dihedral_cyclic_intersection(k: int, g: Word, a: str = "a", x: str = "x") -> CyclicVerdict:
    """⟨a⟩ ∩ g⟨a⟩g^-1 in the even dihedral Artin group with m_{a,x} = 2k."""
    if int(k) < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = int(k)
    if not g.letters <= {a, x}:
        raise GraphMismatch(f"dihedral word over {a}, {x} uses {sorted(g.letters - {a, x})}")
    if k == 1:
        return CyclicVerdict.FULL
    s = exponent_sum(g, x)
    if s % k:
        return CyclicVerdict.TRIVIAL
    ctx = vertex_kernel_graph(_dihedral_graph(a, x, k), x)
    e = SIGMA_CONJUGATION_SIGN * (s // k)
    w = kernel_rewrite(ctx, g * Word.gen(x, -s)) * ctx.sigma(a) ** e
    return CyclicVerdict.FULL if w.letters <= {indexed_name(a, 0)} else CyclicVerdict.TRIVIAL


def link_exterior_reduce(graph: ArtinGraph, A: Iterable[str], g: Word, x: str) -> tuple[Word, frozenset[str]]:
    """h with G_A ∩ gG_Ag^-1 ⊆ hG_{lk(x)}h^-1, read off the first piece of g over st(x) and V - {x}."""
    A = graph.require_all(A)
    x = graph.require(x)
    require_letters(graph, g)
    if x in A:
        raise PreconditionFailed(f"{x} lies in the support")
    Z = graph.link(x)
    if A <= Z:
        raise PreconditionFailed(f"the support lies in lk({x})")
    if in_standard_parabolic(graph, g, graph.vertex_set - {x}):
        raise PreconditionFailed(f"the conjugator lies in G_(V-{{{x}}}); pass to that subgraph first")
    fac = amalgam_reduce(graph, x, g)
    return fac.blocks[0].word, Z


def same_support_full_stars(
    graph: ArtinGraph, A: Iterable[str], g: Word, *, trace: Optional[Trace] = None
) -> IntersectionOutcome:
    """Decide G_A against gG_Ag^-1 when every vertex outside A is joined to all others."""
    A = graph.require_all(A)
    require_letters(graph, g)
    V = graph.vertex_set
    for y in sorted(V - A):
        if graph.star(y) != V:
            raise PreconditionFailed(f"st({y}) is not the whole graph")
    big = _big_edges_across(graph, A)
    if not A or not big:
        _note(trace, "full-stars-split", A, g)
        return Equal()
    product = next(((y, a) for y, a in big if A <= graph.star(a)), None)
    if product is not None:
        return _product_branch(graph, A, g, product[0], product[1], len(big), trace)
    x, a = big[0]
    return _kernel_branch(graph, A, g, x, a, len(big), trace)


def _product_branch(
    graph: ArtinGraph, A: frozenset[str], g: Word, x: str, a: str, n_big: int, trace: Optional[Trace]
) -> IntersectionOutcome:
    k = int(graph.label(x, a) or 0) // 2
    verdict = dihedral_cyclic_intersection(k, retraction_image(g, {a, x}), a, x)
    rest = A - {a}
    _note(trace, "dihedral-factor", A, g, vertex=x, generator=a, verdict=verdict.value)
    if verdict is CyclicVerdict.TRIVIAL:
        return ContainedIn(IDENTITY, rest)
    sub = induced_subgraph(graph, graph.vertex_set - {a, x})
    if len(_big_edges_across(sub, rest)) >= n_big:
        raise RuntimeError("product split did not lower the count of big edges")
    inner = same_support_full_stars(sub, rest, retraction_image(g, sub.vertex_set), trace=trace)
    if isinstance(inner, Equal):
        return Equal()
    return ContainedIn(inner.conjugator, inner.support | {a})


def _kernel_branch(
    graph: ArtinGraph, A: frozenset[str], g: Word, x: str, a: str, n_big: int, trace: Optional[Trace]
) -> IntersectionOutcome:
    ctx = vertex_kernel_graph(graph, x)
    s = exponent_sum(g, x)
    h = kernel_rewrite(ctx, g * Word.gen(x, -s))
    A0 = frozenset(indexed_name(b, 0) for b in A)
    if s == 0:
        return _same_level(ctx, A, A0, h, n_big, trace)
    off_level = [b for b in sorted(A) if ctx.k[b] > 1 and s % ctx.k[b]]
    if off_level:
        b = off_level[0]
        out = _lift(ctx, retraction_image(h, A0), A0 - {indexed_name(b, 0)})
        _note(trace, "kernel-off-level", out.support, out.conjugator, vertex=x, generator=b, shift=s)
        return out
    return _shifted_level(ctx, A, A0, h, s, a, trace)


def _same_level(
    ctx: KernelContext, A: frozenset[str], A0: frozenset[str], h: Word, n_big: int, trace: Optional[Trace]
) -> IntersectionOutcome:
    current = window_graph(ctx)
    changed = True
    while changed:
        changed = False
        for v in current.vertices:
            if v in A0:
                continue
            rest = current.vertex_set - {v}
            if in_standard_parabolic(current, h, rest):
                current = induced_subgraph(current, rest)
                h = retraction_image(h, rest)
                changed = True
                break
    higher = [v for v in current.vertices if v not in A0 and split_indexed(v)[0] in A and split_indexed(v)[1] > 0]
    if higher:
        v = higher[0]
        p1, Z = link_exterior_reduce(current, A0, h, v)
        out = _lift(ctx, retraction_image(p1, A0), A0 & Z)
        _note(trace, "kernel-link-exterior", out.support, out.conjugator, vertex=ctx.x, pivot=v)
        return out
    if len(_big_edges_across(current, A0)) >= n_big:
        raise RuntimeError("kernel reduction did not lower the count of big edges")
    _note(trace, "kernel-same-level", A, kernel_embed(ctx, h), vertex=ctx.x, vertices=len(current))
    inner = same_support_full_stars(current, A0, h, trace=trace)
    if isinstance(inner, Equal):
        return Equal()
    return _lift(ctx, inner.conjugator, inner.support)


def _shifted_level(
    ctx: KernelContext, A: frozenset[str], A0: frozenset[str], h: Word, s: int, a: str, trace: Optional[Trace]
) -> IntersectionOutcome:
    graph = ctx.graph
    l = SIGMA_CONJUGATION_SIGN * (s // ctx.k[a])
    f = apply_map(h, phi_map(ctx, a, "inverse"))
    a1 = indexed_name(a, 1)
    alpha = exponent_sum(f, a1)
    lam = vertex_kernel_graph(window_graph(ctx), a1)
    f_lam = kernel_rewrite(lam, f * Word.gen(a1, -alpha))
    A00 = frozenset(indexed_name(b, 0) for b in A0)
    E = set(A & graph.link(a))
    if alpha + l == 0:
        E.add(a)
    if alpha == 0:
        E |= A - graph.star(a)
    if not frozenset(E) < A:
        raise RuntimeError(f"shifted-level witness support {sorted(E)} is not smaller than {sorted(A)}")
    out = _lift(ctx, kernel_embed(lam, retraction_image(f_lam, A00)), {indexed_name(e, 0) for e in E})
    _note(trace, "kernel-shifted-level", out.support, out.conjugator, vertex=ctx.x, generator=a, shift=s, alpha=alpha, l=l)
    return out


def reduce_outcome(
    graph: ArtinGraph, A: Iterable[str], g: Word, *, trace: Optional[Trace] = None
) -> IntersectionOutcome:
    A = graph.require_all(A)
    require_letters(graph, g)
    V = graph.vertex_set
    if all(in_standard_parabolic(graph, Word.gen(s).conjugate(g), A) for s in sorted(A)):
        _note(trace, "equal", A, g)
        return Equal()
    for y in sorted(V - A):
        rest = V - {y}
        if in_standard_parabolic(graph, g, rest):
            sub = induced_subgraph(graph, rest)
            if len(sub) >= len(graph):
                raise RuntimeError(f"removing {y} did not shrink the graph")
            h = subgraph_transport(sub, IDENTITY, A, g, ambient=graph, check=False)
            _note(trace, "subgraph", A, h, removed=y)
            return reduce_outcome(sub, A, h, trace=trace)
    for y in sorted(V - A):
        if not A <= graph.link(y):
            h, Z = link_exterior_reduce(graph, A, g, y)
            out = ContainedIn(retraction_image(h, A), A & Z)
            _note(trace, "link-exterior", out.support, out.conjugator, vertex=y)
            return out
    open_stars = [y for y in sorted(V - A) if graph.star(y) != V]
    if not open_stars:
        return same_support_full_stars(graph, A, g, trace=trace)
    y = open_stars[0]
    fac = amalgam_reduce(graph, y, g)
    prefixes = fac.prefixes()
    steps = [IDENTITY]
    for gi in prefixes[:-1]:
        steps.append(gi * retraction_image(~gi * retraction_image(gi, A), fac.Z))
    steps.append(prefixes[-1])
    _note(trace, "amalgam", A, g, vertex=y, pieces=len(fac.blocks))
    left = fac.geodesic_length
    for i, blk in enumerate(fac.blocks):
        q = ~steps[i] * steps[i + 1]
        side = induced_subgraph(graph, fac.side(blk.tag))
        if len(side) >= len(graph):
            raise RuntimeError(f"step {i} of the amalgam walk did not pass to a smaller factor")
        if not q.letters <= side.vertex_set:
            raise RuntimeError(f"step {i} of the amalgam walk left its factor")
        remaining = amalgam_reduce(graph, y, ~steps[i + 1] * g).geodesic_length
        if remaining >= left:
            raise RuntimeError(f"step {i} of the amalgam walk did not get closer to the conjugator")
        left = remaining
        inner = reduce_outcome(side, A, q, trace=trace)
        if isinstance(inner, ContainedIn):
            return ContainedIn(steps[i] * inner.conjugator, inner.support)
    return Equal()


def _intersect(P: ParabolicSubgroup, Q: ParabolicSubgroup, trace: Optional[Trace], bound: Optional[int]) -> ParabolicSubgroup:
    graph = same_graph(P, Q)
    f, g, C = common_support_reduction(P.conjugator, P.support, Q.conjugator, Q.support)
    if bound is not None and len(C) >= bound:
        raise RuntimeError(f"support did not shrink below {bound}")
    h = ~f * g
    _note(trace, "common-support", C, h)
    conj, support = _same_support(graph, C, h, trace)
    R = ParabolicSubgroup(graph, f * conj, support)
    _note(trace, "result", R.support, R.conjugator)
    return R


def _same_support(graph: ArtinGraph, A: frozenset[str], g: Word, trace: Optional[Trace]) -> tuple[Word, frozenset[str]]:
    if not A:
        return IDENTITY, frozenset()
    outcome = reduce_outcome(graph, A, g, trace=trace)
    if isinstance(outcome, Equal):
        return IDENTITY, A
    if not outcome.support < A:
        raise RuntimeError(f"witness support {sorted(outcome.support)} is not smaller than {sorted(A)}")
    base = ParabolicSubgroup.standard(graph, A)
    around = ParabolicSubgroup(graph, outcome.conjugator, outcome.support)
    bound = len(A)
    left = _intersect(base, around, trace, bound)
    right = _intersect(ParabolicSubgroup(graph, g, A), around, trace, bound)
    R = _intersect(left, right, trace, bound)
    proper_containment_support_check(base, R)
    _note(trace, "witness", outcome.support, outcome.conjugator, within=sorted(A), conjugate=format_word(g), result=R.as_dict())
    return R.conjugator, R.support


def intersect(P: ParabolicSubgroup, Q: ParabolicSubgroup, *, trace: Optional[Trace] = None) -> ParabolicSubgroup:
    return _intersect(P, Q, trace, None)


def intersect_many(groups: Sequence[ParabolicSubgroup], *, trace: Optional[Trace] = None) -> ParabolicSubgroup:
    if not groups:
        raise ValueError("intersect_many needs at least one parabolic subgroup")
    running = groups[0]
    graph = running.graph
    distinct = 1
    for Q in groups[1:]:
        same_graph(running, Q)
        if not running.support:
            break
        nxt = intersect(running, Q, trace=trace)
        proper_containment_support_check(running, nxt)
        if not equal(running, nxt):
            distinct += 1
        running = nxt
    if distinct > len(graph) + 1:
        raise RuntimeError(f"{distinct} distinct values in a chain over {len(graph)} vertices")
    return running


def intersect_with_trace(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> tuple[ParabolicSubgroup, Trace]:
    trace: Trace = []
    return intersect(P, Q, trace=trace), trace


_RECORD_KEYS = ("rule", "support", "conjugator", "detail")


def _recorded(graph: ArtinGraph, conjugator: Any, support: Any) -> ParabolicSubgroup:
    return ParabolicSubgroup(graph, parse_word(str(conjugator), graph), frozenset(support))


def _witness_holds(graph: ArtinGraph, rec: dict[str, Any]) -> bool:
    """The recorded sub-intersection lies in G_A, in gG_Ag^-1 and in the witness."""
    detail = rec.get("detail") or {}
    A = frozenset(detail.get("within", ()))
    result = detail.get("result") or {}
    bounds = (
        ParabolicSubgroup.standard(graph, A),
        _recorded(graph, detail.get("conjugate", "1"), A),
        _recorded(graph, rec["conjugator"], rec["support"]),
    )
    sub = _recorded(graph, result.get("conjugator", "1"), result.get("support", ()))
    return all(member(B, w) for B in bounds for w in sub.generators())


def replay_trace(P: ParabolicSubgroup, Q: ParabolicSubgroup, trace: Trace) -> bool:
    """Re-run the intersection and hold the trace to it.

    Every record must match the recomputed one, every witness must contain the
    sub-intersection it bounds, and the recorded result must equal the fresh
    result and lie in both inputs.
    """
    graph = same_graph(P, Q)
    results = [rec for rec in trace if rec.get("rule") == "result"]
    if not results:
        raise ValueError("trace has no result record")
    fresh_R, fresh = intersect_with_trace(P, Q)
    if len(fresh) != len(trace):
        log.info("trace has %d records, the replay %d", len(trace), len(fresh))
        return False
    for i, (rec, ref) in enumerate(zip(trace, fresh)):
        if any(rec.get(key) != ref[key] for key in _RECORD_KEYS):
            log.info("trace record %d (%s) does not replay", i, rec.get("rule"))
            return False
    try:
        for rec in trace:
            if rec["rule"] == "witness" and not _witness_holds(graph, rec):
                log.info("witness %s over %s does not bound its intersection", rec["conjugator"], rec["support"])
                return False
        R = _recorded(graph, results[-1]["conjugator"], results[-1]["support"])
    except ArtinError as exc:
        log.info("trace does not parse: %s", exc)
        return False
    return equal(R, fresh_R) and all(member(P, w) and member(Q, w) for w in R.generators())
