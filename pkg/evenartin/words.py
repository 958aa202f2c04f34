from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .config import length_cap
from .errors import GraphMismatch, LengthCapExceeded, ParseError, UnmappedGenerator
from .graph import ArtinGraph, check_vertex_name

Syllable = tuple[str, int]


def free_reduce(syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    """Merge adjacent equal generators and drop zero exponents (idempotent)."""
    out: list[Syllable] = []
    for gen, power in syllables:
        if not power:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + int(power)
            if merged:
                out[-1] = (gen, merged)
            else:
                out.pop()
        else:
            out.append((gen, int(power)))
    cap = length_cap()
    if len(out) > cap:
        raise LengthCapExceeded(len(out), cap)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in syllable form; an element of G_Γ up to free reduction."""

    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "syllables", free_reduce(self.syllables))

    @classmethod
    def gen(cls, v: str, power: int = 1) -> Word:
        return cls(((v, int(power)),))

    @classmethod
    def from_letters(cls, letters: Iterable[Syllable]) -> Word:
        return cls(tuple(letters))

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __len__(self) -> int:
        return sum(abs(p) for _g, p in self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    @property
    def n_syllables(self) -> int:
        return len(self.syllables)

    @property
    def letters(self) -> frozenset[str]:
        return frozenset(g for g, _p in self.syllables)

    def letter_list(self) -> list[Syllable]:
        out: list[Syllable] = []
        for gen, power in self.syllables:
            step = 1 if power > 0 else -1
            out.extend((gen, step) for _ in range(abs(power)))
        return out

    def __mul__(self, other: Word) -> Word:
        return Word(self.syllables + other.syllables)

    def __invert__(self) -> Word:
        return Word(tuple((g, -p) for g, p in reversed(self.syllables)))

    def __pow__(self, n: int) -> Word:
        if n == 0:
            return Word()
        if n < 0:
            return (~self) ** (-n)
        half = self ** (n // 2)
        return half * half * self if n % 2 else half * half

    def conjugate(self, by: Word) -> Word:
        """by · self · by^{-1}"""
        return by * self * ~by

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word()


def concat(*words: Word) -> Word:
    out: list[Syllable] = []
    for w in words:
        out.extend(w.syllables)
    return Word(tuple(out))


def invert(w: Word) -> Word:
    return ~w


def conjugate(w: Word, by: Word) -> Word:
    return w.conjugate(by)


def format_word(w: Word) -> str:
    if not w.syllables:
        return "1"
    return " ".join(g if p == 1 else f"{g}^{p}" for g, p in w.syllables)


def parse_word(text: str, graph: ArtinGraph | None = None) -> Word:
    """Parse `a x^-1 b^3`; `1` is the empty word. Letters are checked against `graph` when given."""
    out: list[Syllable] = []
    for tok in str(text or "").split():
        if tok == "1":
            continue
        gen, sep, raw_power = tok.rpartition("^")
        if not sep:
            gen, power = tok, 1
        else:
            try:
                power = int(raw_power)
            except ValueError:
                raise ParseError(f"bad exponent in token {tok!r}") from None
            if power == 0:
                raise ParseError(f"zero exponent in token {tok!r}")
        check_vertex_name(gen)
        out.append((gen, power))
    w = Word(tuple(out))
    if graph is not None:
        require_letters(graph, w)
    return w


def require_letters(graph: ArtinGraph, w: Word) -> Word:
    extra = sorted(w.letters - graph.vertex_set)
    if extra:
        raise GraphMismatch(f"word uses letters outside the graph: {', '.join(extra)}")
    return w


def retraction_image(w: Word, S: Iterable[str], graph: ArtinGraph | None = None) -> Word:
    """ρ_S(w): delete letters outside S, then reduce (valid because every label is even)."""
    keep = frozenset(S)
    if graph is not None:
        graph.require_all(keep)
    return Word(tuple((g, p) for g, p in w.syllables if g in keep))


def exponent_sum(w: Word, v: str) -> int:
    return sum(p for g, p in w.syllables if g == v)


@dataclass(frozen=True)
class GeneratorMap:
    """Total map from source generators to words; letters outside `images` are unmapped."""

    images: Mapping[str, Word] = field(default_factory=dict)

    @classmethod
    def identity(cls, gens: Iterable[str]) -> GeneratorMap:
        return cls({g: Word.gen(g) for g in gens})

    def with_image(self, gen: str, image: Word) -> GeneratorMap:
        out = dict(self.images)
        out[gen] = image
        return GeneratorMap(out)

    def __call__(self, w: Word) -> Word:
        return apply_map(w, self)


def apply_map(w: Word, m: GeneratorMap) -> Word:
    parts: list[Syllable] = []
    cache: dict[str, Word] = {}
    for gen, power in w.syllables:
        if gen not in m.images:
            raise UnmappedGenerator(gen)
        img = m.images[gen]
        key = f"{gen}^{power}"
        if key not in cache:
            cache[key] = img ** power
        parts.extend(cache[key].syllables)
    return Word(tuple(parts))


def alternating_product(u: str, v: str, m: int) -> Word:
    """prod(u, v, m) = u v u v ... with m letters."""
    return Word(tuple((u if i % 2 == 0 else v, 1) for i in range(int(m))))


def artin_relator(u: str, v: str, m: int) -> Word:
    return alternating_product(u, v, m) * ~alternating_product(v, u, m)
