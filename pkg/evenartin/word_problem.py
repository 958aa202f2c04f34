from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Iterable

from .errors import GraphMismatch, StarIsFull
from .graph import ArtinGraph, amalgam_split, amalgam_split_at, direct_product_split, induced_subgraph
from .words import Syllable, Word, exponent_sum, require_letters, retraction_image

log = logging.getLogger(__name__)

TAG_X = "X"
TAG_Y = "Y"
TAG_Z = "Z"


@dataclass(frozen=True)
class DihedralNormalForm:
    """Normal form in <a, c | a c^k a^-1 = c^k>, c = ab, a the name-least generator.

    `central` is the exponent N of the central factor c^(kN); `syllables`
    alternates ("a", e != 0) and ("c", r) with 0 < r < k.
    """

    k: int
    a: str
    b: str
    central: int
    syllables: tuple[tuple[str, int], ...]

    @property
    def is_identity(self) -> bool:
        return self.central == 0 and not self.syllables

    def as_dict(self) -> dict[str, object]:
        return {
            "k": self.k,
            "a": self.a,
            "b": self.b,
            "central": self.central,
            "syllables": [[s, e] for s, e in self.syllables],
        }


def _dihedral_pair(w: Word, pair: Iterable[str] | None) -> tuple[str, str]:
    names = sorted(set(pair) if pair is not None else w.letters)
    if pair is None and len(names) < 2:
        # a lone generator: the partner never occurs, any name works
        names = names + ["~"] if names else ["~a", "~b"]
    if len(names) != 2:
        raise GraphMismatch(f"dihedral words need exactly two generators, got {names}")
    if not w.letters <= set(names):
        raise GraphMismatch(f"word letters {sorted(w.letters)} are not in {names}")
    return names[0], names[1]


def dihedral_reduce(k: int, w: Word, pair: Iterable[str] | None = None) -> DihedralNormalForm:
    if int(k) < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = int(k)
    a, b = _dihedral_pair(w, pair)
    stack: list[list[object]] = []
    central = 0

    def push(sym: str, e: int) -> None:
        nonlocal central
        if stack and stack[-1][0] == sym:
            e += int(stack.pop()[1])  # type: ignore[arg-type]
        if sym == "c":
            q, e = divmod(e, k)
            central += q
        if e:
            stack.append([sym, e])

    for gen, power in w.letter_list():
        if gen == a:
            push("a", power)
        elif power > 0:  # b = a^-1 c
            push("a", -1)
            push("c", 1)
        else:  # b^-1 = c^-1 a
            push("c", -1)
            push("a", 1)
    return DihedralNormalForm(k=k, a=a, b=b, central=central, syllables=tuple((str(s), int(e)) for s, e in stack))


@dataclass(frozen=True)
class AmalgamBlock:
    tag: str
    word: Word


@dataclass(frozen=True)
class AmalgamFactorization:
    """w = p_1 ... p_n over G_X *_{G_Z} G_Y, with X = st(x), Y = V - {x}, Z = lk(x)."""

    x: str
    X: frozenset[str]
    Y: frozenset[str]
    Z: frozenset[str]
    blocks: tuple[AmalgamBlock, ...]

    @property
    def geodesic_length(self) -> int:
        if len(self.blocks) == 1 and self.blocks[0].tag == TAG_Z:
            return 0
        return len(self.blocks)

    def prefixes(self) -> list[Word]:
        """g_1, ..., g_n with g_i = p_1 ... p_i."""
        out: list[Word] = []
        acc = Word()
        for blk in self.blocks:
            acc = acc * blk.word
            out.append(acc)
        return out

    def product(self) -> Word:
        acc = Word()
        for blk in self.blocks:
            acc = acc * blk.word
        return acc

    def side(self, tag: str) -> frozenset[str]:
        return {TAG_X: self.X, TAG_Y: self.Y, TAG_Z: self.Z}[tag]

    def as_dict(self) -> dict[str, object]:
        from .words import format_word

        return {
            "x": self.x,
            "X": sorted(self.X),
            "Y": sorted(self.Y),
            "Z": sorted(self.Z),
            "blocks": [{"tag": b.tag, "word": format_word(b.word)} for b in self.blocks],
            "geodesic_length": self.geodesic_length,
        }


def is_trivial(graph: ArtinGraph, w: Word) -> bool:
    require_letters(graph, w)
    return _is_trivial(graph, w)


def is_equal(graph: ArtinGraph, u: Word, v: Word) -> bool:
    require_letters(graph, u)
    require_letters(graph, v)
    return _is_trivial(graph, u * ~v)


def in_standard_parabolic(graph: ArtinGraph, w: Word, S: Iterable[str]) -> bool:
    keep = graph.require_all(S)
    require_letters(graph, w)
    if w.letters <= keep:
        return True
    image = retraction_image(w, keep)
    return _is_trivial(graph, w * ~image)


@functools.lru_cache(maxsize=65536)
def _is_trivial(graph: ArtinGraph, w: Word) -> bool:
    if not w.syllables:
        return True
    if w.letters != graph.vertex_set:
        graph = induced_subgraph(graph, w.letters)
    for v in graph.vertices:
        if exponent_sum(w, v):
            return False
    parts = direct_product_split(graph)
    if len(parts) > 1:
        log.debug("product split %s of %d vertices", [sorted(p) for p in parts], len(graph))
        return all(_is_trivial(induced_subgraph(graph, p), retraction_image(w, p)) for p in parts)
    if len(graph) == 1:
        return False
    if graph.is_complete():
        if len(graph) != 2:
            raise RuntimeError(f"complete even FC graph with an indecomposable part of size {len(graph)}")
        a, b = graph.vertices
        return dihedral_reduce(int(graph.label(a, b) or 0) // 2, w, (a, b)).is_identity
    split = amalgam_split(graph)
    assert split is not None
    fac = amalgam_reduce(graph, split.x, w)
    if len(fac.blocks) != 1:
        return False
    blk = fac.blocks[0]
    side = induced_subgraph(graph, fac.side(blk.tag))
    assert len(side) < len(graph)
    return _is_trivial(side, blk.word)


def _tag_of(gen: str, x: str, Z: frozenset[str]) -> str:
    if gen in Z:
        return TAG_Z
    return TAG_X if gen == x else TAG_Y


def amalgam_reduce(graph: ArtinGraph, x: str, w: Word) -> AmalgamFactorization:
    require_letters(graph, w)
    split = amalgam_split_at(graph, graph.require(x))
    if split is None:
        raise StarIsFull(x)
    X, Y, Z = split.X, split.Y, split.Z
    side_graph = {TAG_X: induced_subgraph(graph, X), TAG_Y: induced_subgraph(graph, Y)}

    pending: list[Syllable] = []
    raw: list[list[object]] = []
    for gen, power in w.syllables:
        tag = _tag_of(gen, x, Z)
        if tag == TAG_Z:
            if raw:
                raw[-1][1].append((gen, power))  # type: ignore[attr-defined]
            else:
                pending.append((gen, power))
        elif raw and raw[-1][0] == tag:
            raw[-1][1].append((gen, power))  # type: ignore[attr-defined]
        else:
            raw.append([tag, [(gen, power)]])
    if not raw:
        blocks = [AmalgamBlock(TAG_Z, Word(tuple(pending)))]
        return AmalgamFactorization(x=x, X=X, Y=Y, Z=Z, blocks=tuple(blocks))
    raw[0][1] = pending + list(raw[0][1])  # type: ignore[arg-type]
    blocks = [AmalgamBlock(str(t), Word(tuple(s))) for t, s in raw]  # type: ignore[arg-type]

    def in_z(blk: AmalgamBlock) -> bool:
        return in_standard_parabolic(side_graph[blk.tag], blk.word, Z)

    changed = True
    while changed and len(blocks) > 1:
        changed = False
        for i, blk in enumerate(blocks):
            if not in_z(blk):
                continue
            z = retraction_image(blk.word, Z)
            if i == 0:
                blocks[1:2] = [AmalgamBlock(blocks[1].tag, z * blocks[1].word)]
                del blocks[0]
            elif i == len(blocks) - 1:
                blocks[i - 1 : i] = [AmalgamBlock(blocks[i - 1].tag, blocks[i - 1].word * z)]
                del blocks[i]
            else:
                merged = blocks[i - 1].word * z * blocks[i + 1].word
                blocks[i - 1 : i + 2] = [AmalgamBlock(blocks[i - 1].tag, merged)]
            log.debug("amalgam at %s: absorbed block %d, %d block(s) left", x, i, len(blocks))
            changed = True
            break
    if len(blocks) == 1 and in_z(blocks[0]):
        blocks = [AmalgamBlock(TAG_Z, retraction_image(blocks[0].word, Z))]
    return AmalgamFactorization(x=x, X=X, Y=Y, Z=Z, blocks=tuple(blocks))
