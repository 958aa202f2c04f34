"""Kernels of the retraction onto a vertex and onto the complement of a vertex.

The kernel of ρ_x is presented by an indexed Artin graph Δ whose vertices are
named `type@index` and stand for x^index type x^-index.  Vertices of types
outside st(x) carry every integer index; only a window of them is realized.
A kernel context built on a realized window nests: names become `type@i@j`.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import GraphMismatch, HypothesisViolated, NotAnAutomorphism, NotInKernel, PreconditionFailed
from .graph import INDEX_SEP, ArtinGraph
from .parabolic import ParabolicSubgroup
from .word_problem import is_equal, is_trivial
from .words import (
    IDENTITY,
    GeneratorMap,
    Word,
    apply_map,
    artin_relator,
    concat,
    exponent_sum,
    format_word,
    require_letters,
    retraction_image,
)

log = logging.getLogger(__name__)

# x^l u x^-l = σ_u^(s*q) u_r σ_u^(-s*q) for l = k*q + r, with s this sign
SIGMA_CONJUGATION_SIGN = -1


def indexed_name(vtype: str, index: int) -> str:
    return f"{vtype}{INDEX_SEP}{int(index)}"


def split_indexed(name: str) -> tuple[str, int]:
    vtype, sep, raw = str(name).rpartition(INDEX_SEP)
    if not sep or not vtype:
        raise GraphMismatch(f"{name!r} is not an indexed vertex name")
    try:
        return vtype, int(raw)
    except ValueError:
        raise GraphMismatch(f"{name!r} has a non-integer index") from None


@dataclass(frozen=True)
class IndexedVertex:
    type: str
    index: int

    @property
    def name(self) -> str:
        return indexed_name(self.type, self.index)

    @classmethod
    def parse(cls, name: str) -> IndexedVertex:
        return cls(*split_indexed(name))


class KernelContext:
    """Δ for ker ρ_x together with the per-type constants k_u and words σ_u.

    Only the window of realized indices changes after construction; growth is
    serialized by a per-context lock and readers get immutable snapshots.
    """

    def __init__(self, graph: ArtinGraph, x: str, hypothesis: str, k: dict[str, int], exterior: frozenset[str]) -> None:
        self.graph = graph
        self.x = x
        self.hypothesis = hypothesis
        self.k = dict(k)
        self.exterior = frozenset(exterior)
        self._lo = 0
        self._hi = 0
        self._lock = threading.Lock()
        self._snapshots: dict[tuple[int, int], ArtinGraph] = {}

    @property
    def link(self) -> frozenset[str]:
        return frozenset(self.k)

    def window(self) -> tuple[int, int]:
        with self._lock:
            return self._lo, self._hi

    def touch(self, index: int) -> None:
        if not self.exterior:
            return
        with self._lock:
            if index < self._lo or index > self._hi:
                self._lo = min(self._lo, int(index))
                self._hi = max(self._hi, int(index))
                log.debug("kernel of %s: window grown to [%d, %d]", self.x, self._lo, self._hi)

    def sigma(self, u: str) -> Word:
        if u not in self.k:
            raise GraphMismatch(f"σ is defined only for neighbours of {self.x}, not {u}")
        return Word(tuple((indexed_name(u, i), 1) for i in range(self.k[u])))

    def indices(self, vtype: str, window: tuple[int, int]) -> range:
        if vtype in self.k:
            return range(self.k[vtype])
        return range(window[0], window[1] + 1)

    def check_name(self, name: str) -> tuple[str, int]:
        vtype, index = split_indexed(name)
        if vtype in self.k:
            if not 0 <= index < self.k[vtype]:
                raise GraphMismatch(f"{name} is outside 0..{self.k[vtype] - 1}")
        elif vtype not in self.exterior:
            raise GraphMismatch(f"{name} has no type in the kernel of {self.x}")
        return vtype, index

    def as_dict(self) -> dict[str, Any]:
        delta = window_graph(self)
        return {
            "vertex": self.x,
            "hypothesis": self.hypothesis,
            "k": dict(sorted(self.k.items())),
            "window": list(self.window()),
            "free": kernel_is_free(self),
            "sigma": {u: format_word(self.sigma(u)) for u in sorted(self.k)},
            "delta": delta.as_dict(),
        }


def vertex_kernel_graph(graph: ArtinGraph, x: str) -> KernelContext:
    x = graph.require(x)
    link = graph.link(x)
    full_star = graph.star(x) == graph.vertex_set
    if not full_star and any(graph.label(u, x) != 2 for u in link):
        raise HypothesisViolated(f"st({x}) is not the whole graph and some label at {x} exceeds 2")
    k = {u: int(graph.label(u, x) or 0) // 2 for u in link}
    ctx = KernelContext(graph, x, "a" if full_star else "b", k, graph.vertex_set - graph.star(x))
    window_graph(ctx)
    log.debug("kernel of %s: hypothesis (%s), k = %s", x, ctx.hypothesis, ctx.k)
    return ctx


def window_graph(ctx: KernelContext) -> ArtinGraph:
    """The realized part of Δ as an ordinary validated Artin graph."""
    with ctx._lock:
        window = (ctx._lo, ctx._hi)
        snap = ctx._snapshots.get(window)
        if snap is not None:
            return snap
        types = sorted(ctx.link | ctx.exterior)
        vertices = [indexed_name(t, i) for t in types for i in ctx.indices(t, window)]
        edges: list[tuple[str, str, int]] = []
        for u, v, m in ctx.graph.edges:
            if ctx.x in (u, v):
                continue
            if u in ctx.exterior and v in ctx.exterior:
                pairs: Iterable[tuple[int, int]] = ((i, i) for i in ctx.indices(u, window))
            else:
                pairs = itertools.product(ctx.indices(u, window), ctx.indices(v, window))
            edges.extend((indexed_name(u, i), indexed_name(v, j), m) for i, j in pairs)
        snap = ArtinGraph.build(vertices, edges)
        ctx._snapshots[window] = snap
        return snap


def conjugate_power_formula(ctx: KernelContext, u: str, l: int) -> Word:
    """The Δ-word equal to x^l u x^-l for u in lk(x)."""
    if u not in ctx.k:
        raise GraphMismatch(f"{u} is not a neighbour of {ctx.x}")
    q, r = divmod(int(l), ctx.k[u])
    sigma = ctx.sigma(u)
    e = SIGMA_CONJUGATION_SIGN * q
    return sigma**e * Word.gen(indexed_name(u, r)) * sigma ** (-e)


def kernel_rewrite(ctx: KernelContext, w: Word) -> Word:
    require_letters(ctx.graph, w)
    s = exponent_sum(w, ctx.x)
    if s:
        raise NotInKernel(f"exponent sum of {ctx.x} is {s}, not 0")
    parts: list[Word] = []
    i = 0
    for gen, power in w.syllables:
        if gen == ctx.x:
            i += power
        elif gen in ctx.k:
            parts.append(conjugate_power_formula(ctx, gen, i) ** power)
        else:
            ctx.touch(i)
            parts.append(Word.gen(indexed_name(gen, i), power))
    return concat(*parts)


def kernel_embed(ctx: KernelContext, u: Word) -> Word:
    parts: list[Word] = []
    for name, power in u.syllables:
        vtype, index = ctx.check_name(name)
        shift = Word.gen(ctx.x, index)
        parts.append(shift * Word.gen(vtype, power) * ~shift)
    return concat(*parts)


def phi_map(ctx: KernelContext, a: str, direction: str = "forward") -> GeneratorMap:
    """a_1 -> σ_a (forward) or its inverse substitution; every other generator is fixed."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be forward or inverse, got {direction!r}")
    k = ctx.k.get(a, 0)
    if k < 2:
        raise NotAnAutomorphism(f"{a} needs k > 1 at {ctx.x}, got {k}")
    delta = window_graph(ctx)
    a1 = indexed_name(a, 1)
    for z in sorted(delta.link(a1)):
        for i in range(k):
            if delta.label(z, indexed_name(a, i)) != 2:
                raise NotAnAutomorphism(f"{z} does not commute with {indexed_name(a, i)}")
    ident = GeneratorMap.identity(delta.vertices)
    sigma = ctx.sigma(a)
    tail = Word(tuple((indexed_name(a, i), 1) for i in range(2, k)))
    solved = Word.gen(indexed_name(a, 0), -1) * Word.gen(a1) * ~tail
    forward = ident.with_image(a1, sigma)
    inverse = ident.with_image(a1, solved)
    if apply_map(solved, forward) != Word.gen(a1) or apply_map(sigma, inverse) != Word.gen(a1):
        raise RuntimeError(f"φ at {a1} does not compose to the identity")
    return forward if direction == "forward" else inverse


def kernel_relators(ctx: KernelContext) -> list[tuple[str, Word]]:
    """Both relator families of the kernel presentation over the realized window."""
    delta = window_graph(ctx)
    out: list[tuple[str, Word]] = [("artin", artin_relator(u, v, m)) for u, v, m in delta.edges]
    for u in sorted(ctx.k):
        k = ctx.k[u]
        for i in range(-k, k + 1):
            lhs = concat(*(conjugate_power_formula(ctx, u, j) for j in range(i, i + k)))
            rhs = concat(*(conjugate_power_formula(ctx, u, j) for j in range(i + 1, i + k + 1)))
            out.append(("shift", lhs * ~rhs))
    return out


def kernel_is_free(ctx: KernelContext) -> bool:
    return not window_graph(ctx).edges


def index_parabolic_to_base(ctx: KernelContext, conj: Word, support: Iterable[str]) -> ParabolicSubgroup:
    """Read a Δ-parabolic over one index level n as the Γ-parabolic it equals."""
    parsed = [ctx.check_name(s) for s in sorted(set(support))]
    levels = {index for _t, index in parsed}
    if len(levels) > 1:
        raise PreconditionFailed(f"support spans several index levels: {sorted(levels)}")
    n = levels.pop() if levels else 0
    conj_base = kernel_embed(ctx, conj) * Word.gen(ctx.x, n)
    return ParabolicSubgroup(ctx.graph, conj_base, frozenset(t for t, _i in parsed))


@dataclass(frozen=True)
class CovertexBasisLetter:
    """(t z t^-1)^exponent with ρ_lk(z)(t) = 1."""

    conjugator: Word
    exponent: int

    def as_dict(self) -> dict[str, Any]:
        return {"conjugator": format_word(self.conjugator), "exponent": self.exponent}


def _covertex_checks(graph: ArtinGraph, z: str) -> frozenset[str]:
    z = graph.require(z)
    bad = sorted(u for u in graph.link(z) if graph.label(u, z) != 2)
    if bad:
        raise HypothesisViolated(f"labels at {z} must all be 2; {', '.join(bad)} are not")
    return graph.link(z)


def covertex_rewrite(graph: ArtinGraph, z: str, w: Word) -> list[CovertexBasisLetter]:
    link = _covertex_checks(graph, z)
    require_letters(graph, w)
    rest = graph.vertex_set - {z}
    if not is_trivial(graph, retraction_image(w, rest)):
        raise NotInKernel(f"the image of the word in G_(V-{{{z}}}) is not trivial")
    out: list[CovertexBasisLetter] = []
    prefix = IDENTITY
    for gen, power in w.syllables:
        if gen != z:
            prefix = prefix * Word.gen(gen, power)
            continue
        t = prefix * ~retraction_image(prefix, link)
        if out and is_equal(graph, out[-1].conjugator, t):
            merged = out.pop().exponent + power
            if merged:
                out.append(CovertexBasisLetter(t, merged))
        else:
            out.append(CovertexBasisLetter(t, power))
    return out


def covertex_expand(graph: ArtinGraph, z: str, letters: Iterable[CovertexBasisLetter]) -> Word:
    _covertex_checks(graph, z)
    return concat(*(Word.gen(z, ltr.exponent).conjugate(ltr.conjugator) for ltr in letters))
