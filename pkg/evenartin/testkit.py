"""Brute-force oracle, seeded generators and self-checks.

Nothing here is used by the solver itself; it is the independent ground truth
the tests and `evenartin selftest` compare against.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections import deque
from typing import Any, Iterable, Optional, Sequence

from .config import DEFAULT_ORACLE_BUDGET, DEFAULT_ORACLE_RADIUS, Settings
from .errors import ArtinError, BudgetExceeded, GraphMismatch
from .graph import ArtinGraph, RawGraph, induced_subgraph, validate
from .intersection import intersect
from .parabolic import ParabolicSubgroup, equal, member
from .word_problem import dihedral_reduce, is_equal
from .words import IDENTITY, Word, artin_relator, exponent_sum, format_word, require_letters, retraction_image

log = logging.getLogger(__name__)

Letter = tuple[str, int]


def _letters(w: Word) -> tuple[Letter, ...]:
    return tuple(w.letter_list())


def _cyclic_canon(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Cyclically reduce, then pick the least rotation."""
    out = list(Word.from_letters(letters).letter_list())
    while len(out) > 1 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    if not out:
        return ()
    n = len(out)
    return min(tuple(out[i:] + out[:i]) for i in range(n))


class CongruenceBall:
    """Relator rewriting on cyclic words of bounded length.

    A word is proved trivial when rewriting reaches the empty word.  Every move
    replaces a piece of a relator by the inverse of the rest of it, so classes
    only ever merge words that are equal in the group.
    """

    def __init__(self, graph: ArtinGraph, radius: int, budget: int = DEFAULT_ORACLE_BUDGET) -> None:
        self.graph = graph
        self.radius = int(radius)
        self.budget = int(budget)
        pieces: set[tuple[tuple[Letter, ...], tuple[Letter, ...]]] = set()
        longest = 0
        for u, v, m in graph.edges:
            rel = _letters(artin_relator(u, v, m))
            longest = max(longest, len(rel))
            for r in (rel, _letters(~Word.from_letters(rel))):
                for i in range(len(r)):
                    rot = r[i:] + r[:i]
                    for j in range(1, len(rot) + 1):
                        head, tail = rot[:j], rot[j:]
                        pieces.add((head, _letters(~Word.from_letters(tail))))
        self.pieces = sorted(pieces)
        self.bound = self.radius + longest

    def _moves(self, state: tuple[Letter, ...]) -> Iterable[tuple[Letter, ...]]:
        n = len(state)
        doubled = state + state
        for head, repl in self.pieces:
            m = len(head)
            if m > n:
                continue
            for i in range(n):
                if doubled[i : i + m] == head:
                    rotated = doubled[i + m : i + n] + repl
                    if len(rotated) <= self.bound:
                        yield _cyclic_canon(rotated)

    def proves_trivial(self, w: Word) -> bool:
        start = _cyclic_canon(_letters(w))
        if not start:
            return True
        seen = {start}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            for nxt in self._moves(state):
                if not nxt:
                    return True
                if nxt not in seen:
                    if len(seen) >= self.budget:
                        raise BudgetExceeded(len(seen), self.budget)
                    seen.add(nxt)
                    queue.append(nxt)
        return False


def _separated(graph: ArtinGraph, w: Word) -> bool:
    """True when some quotient invariant shows w is not trivial."""
    for v in graph.vertices:
        if exponent_sum(w, v):
            return True
    for p, q in itertools.combinations(graph.vertices, 2):
        image = retraction_image(w, {p, q})
        m = graph.label(p, q)
        if m is None:
            if image:
                return True
        elif not dihedral_reduce(m // 2, image, (p, q)).is_identity:
            return True
    return False


def oracle_equal(
    graph: ArtinGraph,
    u: Word,
    v: Word,
    L: Optional[int] = None,
    *,
    budget: int = DEFAULT_ORACLE_BUDGET,
    strict: bool = True,
) -> Optional[bool]:
    """True / False when decisive, None when unknown."""
    require_letters(graph, u)
    require_letters(graph, v)
    radius = int(L) if L is not None else max(DEFAULT_ORACLE_RADIUS, len(u), len(v))
    w = u * ~v
    if not w:
        return True
    if _separated(graph, w):
        return False
    for size in range(3, len(graph)):
        for S in itertools.combinations(graph.vertices, size):
            sub = induced_subgraph(graph, S)
            if oracle_equal(sub, retraction_image(u, S), retraction_image(v, S), radius, budget=budget, strict=False) is False:
                return False
    try:
        return True if CongruenceBall(graph, radius, budget).proves_trivial(w) else None
    except BudgetExceeded:
        if strict:
            raise
        log.warning("oracle budget of %d states exhausted on %s", budget, format_word(w))
        return None


def random_graph(
    seed: int,
    max_vertices: int,
    label_pool: Iterable[int] = (2, 4, 6),
    *,
    edge_prob: float = 0.6,
    attempts: int = 1000,
) -> ArtinGraph:
    pool = sorted(set(int(m) for m in label_pool))
    if not pool or any(m < 2 or m % 2 for m in pool):
        raise ValueError(f"label pool must hold even labels >= 2, got {pool}")
    rng = random.Random(seed)
    for _ in range(attempts):
        n = rng.randint(1, max(1, int(max_vertices)))
        names = [chr(ord("a") + i) if i < 26 else f"v{i}" for i in range(n)]
        edges = [
            (u, v, rng.choice(pool), 0)
            for u, v in itertools.combinations(names, 2)
            if rng.random() < edge_prob
        ]
        res = validate(RawGraph(tuple(names), tuple(edges)))
        if isinstance(res, ArtinGraph):
            return res
    raise RuntimeError(f"no even FC graph found in {attempts} attempts")


def random_word(seed: int, graph: ArtinGraph, max_len: int) -> Word:
    rng = random.Random(seed)
    if not graph.vertices:
        return IDENTITY
    n = rng.randint(0, max(0, int(max_len)))
    return Word(tuple((rng.choice(graph.vertices), rng.choice((1, -1))) for _ in range(n)))


def reduced_words(letters: Iterable[str], max_len: int) -> list[Word]:
    """Every freely reduced word over `letters` of length at most max_len, shortest first."""
    gens = sorted(set(letters))
    out = [IDENTITY]
    frontier = [IDENTITY]
    for _ in range(int(max_len)):
        nxt: list[Word] = []
        for w in frontier:
            last = w.letter_list()[-1] if w else None
            for gen, eps in itertools.product(gens, (1, -1)):
                if last == (gen, -eps):
                    continue
                nxt.append(w * Word.gen(gen, eps))
        out.extend(nxt)
        frontier = nxt
    return out


def random_parabolic(seed: int, graph: ArtinGraph, *, max_len: int = 4) -> ParabolicSubgroup:
    rng = random.Random(seed)
    support = frozenset(v for v in graph.vertices if rng.random() < 0.5)
    return ParabolicSubgroup(graph, random_word(rng.randrange(1 << 30), graph, max_len), support)


def random_element(seed: int, P: ParabolicSubgroup, max_len: int) -> Word:
    inner = random_word(seed, induced_subgraph(P.graph, P.support), max_len) if P.support else IDENTITY
    return inner.conjugate(P.conjugator)


def is_raag(graph: ArtinGraph) -> bool:
    return all(m == 2 for _u, _v, m in graph.edges)


class RaagPiles:
    """Piling of a word in a right-angled Artin group.

    Each generator owns a deque; a letter is pushed on its own pile and a 0
    marker on the pile of every generator it does not commute with.
    """

    def __init__(self, graph: ArtinGraph) -> None:
        self.graph = graph
        self.blockers = {
            v: frozenset(u for u in graph.vertices if u != v and not graph.commutes(u, v)) for v in graph.vertices
        }
        self.piles: dict[str, deque[int]] = {v: deque() for v in graph.vertices}

    def push(self, gen: str, eps: int) -> None:
        pile = self.piles[gen]
        if pile and pile[-1] == -eps:
            pile.pop()
            for u in self.blockers[gen]:
                self.piles[u].pop()
            return
        pile.append(eps)
        for u in self.blockers[gen]:
            self.piles[u].append(0)

    def pile(self, w: Word) -> RaagPiles:
        for gen, eps in w.letter_list():
            self.push(gen, eps)
        return self

    def front(self, gen: str) -> int:
        pile = self.piles[gen]
        return pile[0] if pile else 0

    def top(self, gen: str) -> int:
        pile = self.piles[gen]
        return pile[-1] if pile else 0

    def pop_front(self, gen: str) -> int:
        eps = self.piles[gen].popleft()
        for u in self.blockers[gen]:
            self.piles[u].popleft()
        return eps

    def pop_top(self, gen: str) -> int:
        eps = self.piles[gen].pop()
        for u in self.blockers[gen]:
            self.piles[u].pop()
        return eps

    def depile(self) -> Word:
        out: list[Letter] = []
        while True:
            gen = next((v for v in self.graph.vertices if self.front(v)), None)
            if gen is None:
                return Word.from_letters(out)
            out.append((gen, self.pop_front(gen)))


def raag_intersection(P: ParabolicSubgroup, Q: ParabolicSubgroup) -> ParabolicSubgroup:
    """Intersection in a right-angled Artin group via minimal double coset representatives."""
    graph = P.graph
    if Q.graph != graph:
        raise GraphMismatch("parabolic subgroups live in different Artin groups")
    if not is_raag(graph):
        raise ArtinError("raag_intersection needs every label to be 2")
    A, B = P.support, Q.support
    piles = RaagPiles(graph).pile(~P.conjugator * Q.conjugator)
    head: list[Letter] = []
    changed = True
    while changed:
        changed = False
        for v in graph.vertices:
            if v in A and piles.front(v):
                head.append((v, piles.pop_front(v)))
                changed = True
            if v in B and piles.top(v):
                piles.pop_top(v)
                changed = True
    core = piles.depile()
    keep = frozenset(v for v in A & B if all(graph.commutes(v, u) for u in core.letters))
    return ParabolicSubgroup(graph, P.conjugator * Word.from_letters(head), keep)


def sample_soundness(
    P: ParabolicSubgroup,
    Q: ParabolicSubgroup,
    R: ParabolicSubgroup,
    *,
    seed: int = 0,
    samples: int = 50,
    max_len: int = 6,
) -> list[str]:
    """Problems found when testing R against P ∩ Q on sampled elements; empty when none."""
    problems = [f"generator {format_word(w)} of R is not in P ∩ Q" for w in R.generators() if not (member(P, w) and member(Q, w))]
    rng = random.Random(seed)
    for _ in range(samples):
        w = random_element(rng.randrange(1 << 30), R, max_len)
        if not (member(P, w) and member(Q, w)):
            problems.append(f"{format_word(w)} lies in R but not in P ∩ Q")
        for src in (P, Q):
            w = random_element(rng.randrange(1 << 30), src, max_len)
            if member(P, w) and member(Q, w) and not member(R, w):
                problems.append(f"{format_word(w)} lies in P ∩ Q but not in R")
    return problems


def run_selftest(settings: Settings, **overrides: Any) -> dict[str, Any]:
    """Oracle agreement, intersection soundness and the right-angled cross-check on seeded instances."""
    opts = dict(settings.selftest)
    opts.update({k: v for k, v in overrides.items() if v is not None})
    seed = int(opts["seed"])
    vertices = int(opts["vertices"])
    length = int(opts["length"])
    cases = int(opts["cases"])
    rng = random.Random(seed)
    report: dict[str, Any] = {
        "seed": seed,
        "cases": cases,
        "oracle": {"agree": 0, "disagree": 0, "unknown": 0},
        "intersect": {"sound": 0, "unsound": 0},
        "raag": {"agree": 0, "disagree": 0},
        "failures": [],
    }
    for case in range(cases):
        graph = random_graph(rng.randrange(1 << 30), vertices, (2, 4, 6))
        u = random_word(rng.randrange(1 << 30), graph, length)
        v = random_word(rng.randrange(1 << 30), graph, length)
        truth = oracle_equal(graph, u, v, max(length, settings.oracle_radius), budget=settings.oracle_budget, strict=False)
        if truth is None:
            report["oracle"]["unknown"] += 1
        elif truth == is_equal(graph, u, v):
            report["oracle"]["agree"] += 1
        else:
            report["oracle"]["disagree"] += 1
            report["failures"].append({"case": case, "kind": "oracle", "graph": graph.as_dict(), "u": str(u), "v": str(v)})
        P = random_parabolic(rng.randrange(1 << 30), graph)
        Q = random_parabolic(rng.randrange(1 << 30), graph)
        R = intersect(P, Q)
        problems = sample_soundness(P, Q, R, seed=case, samples=10, max_len=length)
        report["intersect"]["unsound" if problems else "sound"] += 1
        if problems:
            report["failures"].append({"case": case, "kind": "intersect", "P": str(P), "Q": str(Q), "problems": problems[:3]})
        if is_raag(graph):
            same = raag_intersection(P, Q)
            if equal(same, R):
                report["raag"]["agree"] += 1
            else:
                report["raag"]["disagree"] += 1
                report["failures"].append({"case": case, "kind": "raag", "P": str(P), "Q": str(Q)})
    report["ok"] = not report["failures"]
    log.info("selftest seed=%d cases=%d ok=%s", seed, cases, report["ok"])
    return report
