from __future__ import annotations

import random
import unittest

from evenartin.errors import GraphMismatch, HypothesisViolated, NotAnAutomorphism, NotInKernel
from evenartin.graph import ArtinGraph, induced_subgraph
from evenartin.kernels import (
    CovertexBasisLetter,
    IndexedVertex,
    conjugate_power_formula,
    covertex_expand,
    covertex_rewrite,
    index_parabolic_to_base,
    indexed_name,
    kernel_embed,
    kernel_is_free,
    kernel_relators,
    kernel_rewrite,
    phi_map,
    split_indexed,
    vertex_kernel_graph,
    window_graph,
)
from evenartin.testkit import random_word, reduced_words
from evenartin.word_problem import is_equal, is_trivial
from evenartin.words import IDENTITY, Word, apply_map, exponent_sum, format_word, parse_word, retraction_image


def triangle() -> ArtinGraph:
    return ArtinGraph.build(["a", "b", "x"], [("a", "x", 4), ("b", "x", 2), ("a", "b", 2)])


def path() -> ArtinGraph:
    return ArtinGraph.build(["a", "b", "c"], [("a", "b", 4), ("b", "c", 2)])


def square_star() -> ArtinGraph:
    # x joined to everything; b-c carries the only big label off x
    return ArtinGraph.build(
        ["a", "b", "c", "x"],
        [("a", "x", 4), ("b", "x", 2), ("c", "x", 2), ("a", "b", 2), ("a", "c", 2), ("b", "c", 4)],
    )


def kernel_word(seed: int, graph: ArtinGraph, max_len: int) -> Word:
    w = random_word(seed, graph, max_len)
    return w * Word.gen("x", -exponent_sum(w, "x"))


class IndexedNameTest(unittest.TestCase):
    def test_names(self) -> None:
        self.assertEqual(indexed_name("a", -2), "a@-2")
        self.assertEqual(split_indexed("a@1@0"), ("a@1", 0))
        self.assertEqual(IndexedVertex.parse("b@3").name, "b@3")
        with self.assertRaises(GraphMismatch):
            split_indexed("a")
        with self.assertRaises(GraphMismatch):
            split_indexed("a@one")


class VertexKernelTest(unittest.TestCase):
    def test_full_star_kernel_graph(self) -> None:
        ctx = vertex_kernel_graph(triangle(), "x")
        self.assertEqual(ctx.hypothesis, "a")
        self.assertEqual(ctx.k, {"a": 2, "b": 1})
        delta = window_graph(ctx)
        self.assertEqual(delta.vertices, ("a@0", "a@1", "b@0"))
        self.assertEqual(delta.edges, (("a@0", "b@0", 2), ("a@1", "b@0", 2)))
        self.assertEqual(format_word(ctx.sigma("a")), "a@0 a@1")
        self.assertFalse(kernel_is_free(ctx))

    def test_rewrite_into_the_kernel(self) -> None:
        ctx = vertex_kernel_graph(triangle(), "x")
        self.assertEqual(kernel_rewrite(ctx, parse_word("x a x^-1")), Word.gen("a@1"))
        self.assertEqual(kernel_rewrite(ctx, parse_word("x^2 a x^-2")), parse_word("a@1^-1 a@0 a@1"))
        self.assertEqual(kernel_rewrite(ctx, parse_word("x^5 b x^-5")), Word.gen("b@0"))
        with self.assertRaises(NotInKernel):
            kernel_rewrite(ctx, parse_word("x a"))

    def test_conjugation_formula_matches_the_group(self) -> None:
        g = triangle()
        ctx = vertex_kernel_graph(g, "x")
        for l in range(-4, 5):
            lhs = kernel_embed(ctx, conjugate_power_formula(ctx, "a", l))
            rhs = Word.gen("a").conjugate(Word.gen("x", l))
            self.assertTrue(is_equal(g, lhs, rhs), l)

    def test_relators_hold_in_the_group(self) -> None:
        g = triangle()
        ctx = vertex_kernel_graph(g, "x")
        rels = kernel_relators(ctx)
        self.assertEqual(sum(1 for kind, _ in rels if kind == "artin"), 2)
        self.assertEqual(sum(1 for kind, _ in rels if kind == "shift"), 8)
        for kind, rel in rels:
            self.assertTrue(is_trivial(g, kernel_embed(ctx, rel)), (kind, format_word(rel)))

    def test_open_star_window_grows(self) -> None:
        ctx = vertex_kernel_graph(path(), "c")
        self.assertEqual(ctx.hypothesis, "b")
        self.assertEqual(window_graph(ctx).vertices, ("a@0", "b@0"))
        self.assertEqual(kernel_rewrite(ctx, parse_word("c a c^-1")), Word.gen("a@1"))
        self.assertEqual(ctx.window(), (0, 1))
        delta = window_graph(ctx)
        self.assertEqual(delta.vertices, ("a@0", "a@1", "b@0"))
        self.assertEqual(delta.label("a@1", "b@0"), 4)

    def test_exterior_edges_join_equal_indices_only(self) -> None:
        g = ArtinGraph.build(["x", "y", "a", "c"], [("x", "y", 2), ("a", "c", 4), ("y", "a", 2)])
        ctx = vertex_kernel_graph(g, "x")
        kernel_rewrite(ctx, parse_word("x a c x^-1"))
        delta = window_graph(ctx)
        self.assertEqual(delta.label("a@1", "c@1"), 4)
        self.assertIsNone(delta.label("a@0", "c@1"))
        self.assertEqual(delta.label("y@0", "a@1"), 2)

    def test_hypothesis_violation(self) -> None:
        with self.assertRaises(HypothesisViolated):
            vertex_kernel_graph(path(), "a")

    def test_index_parabolic_to_base(self) -> None:
        g = triangle()
        ctx = vertex_kernel_graph(g, "x")
        P = index_parabolic_to_base(ctx, Word(), {"a@1"})
        self.assertEqual(P.support, frozenset({"a"}))
        self.assertEqual(format_word(P.conjugator), "x")


class PhiMapTest(unittest.TestCase):
    def test_forward_and_inverse(self) -> None:
        ctx = vertex_kernel_graph(triangle(), "x")
        fwd = phi_map(ctx, "a")
        inv = phi_map(ctx, "a", "inverse")
        self.assertEqual(format_word(apply_map(Word.gen("a@1"), fwd)), "a@0 a@1")
        self.assertEqual(format_word(apply_map(Word.gen("a@1"), inv)), "a@0^-1 a@1")
        w = parse_word("a@1 b@0 a@0^-1 a@1^2")
        self.assertEqual(apply_map(apply_map(w, fwd), inv), w)

    def test_needs_k_above_one(self) -> None:
        ctx = vertex_kernel_graph(triangle(), "x")
        with self.assertRaises(NotAnAutomorphism):
            phi_map(ctx, "b")
        with self.assertRaises(ValueError):
            phi_map(ctx, "a", "sideways")


class KernelRoundTripTest(unittest.TestCase):
    def test_embed_undoes_rewrite(self) -> None:
        for g in (triangle(), square_star()):
            ctx = vertex_kernel_graph(g, "x")
            for seed in range(250):
                w = kernel_word(seed, g, 6)
                self.assertTrue(is_equal(g, kernel_embed(ctx, kernel_rewrite(ctx, w)), w), format_word(w))

    def test_rewrite_undoes_embed(self) -> None:
        for g in (triangle(), square_star()):
            ctx = vertex_kernel_graph(g, "x")
            delta = window_graph(ctx)
            for seed in range(100):
                u = random_word(seed, delta, 6)
                self.assertTrue(is_equal(delta, kernel_rewrite(ctx, kernel_embed(ctx, u)), u), format_word(u))

    def test_relators_of_a_larger_kernel_hold(self) -> None:
        g = square_star()
        ctx = vertex_kernel_graph(g, "x")
        self.assertEqual(window_graph(ctx).label("b@0", "c@0"), 4)
        for kind, rel in kernel_relators(ctx):
            self.assertTrue(is_trivial(g, kernel_embed(ctx, rel)), (kind, format_word(rel)))

    def test_phi_carries_relators_to_trivial_words(self) -> None:
        for g in (triangle(), square_star()):
            ctx = vertex_kernel_graph(g, "x")
            delta = window_graph(ctx)
            for direction in ("forward", "inverse"):
                m = phi_map(ctx, "a", direction)
                for kind, rel in kernel_relators(ctx):
                    self.assertTrue(is_trivial(delta, apply_map(rel, m)), (direction, kind, format_word(rel)))

    def test_covertex_round_trip(self) -> None:
        g = path()
        for seed in range(300):
            w = random_word(seed, g, 6)
            w = w * ~retraction_image(w, {"a", "b"})
            letters = covertex_rewrite(g, "c", w)
            self.assertTrue(is_equal(g, covertex_expand(g, "c", letters), w), format_word(w))


class KernelFreenessTest(unittest.TestCase):
    def test_edgeless_link_gives_a_free_kernel(self) -> None:
        g = ArtinGraph.build(["a", "b", "x"], [("a", "x", 4), ("b", "x", 6)])
        ctx = vertex_kernel_graph(g, "x")
        self.assertTrue(kernel_is_free(ctx))
        self.assertEqual(len(window_graph(ctx)), sum(ctx.k.values()))
        self.assertEqual(len(window_graph(ctx)), 5)
        self.assertTrue(ctx.as_dict()["free"])

    def test_reduced_basis_sequences_expand_to_nontrivial_words(self) -> None:
        g = path()
        side = induced_subgraph(g, {"a", "b"})
        rng = random.Random(62)
        checked = 0
        while checked < 200:
            letters: list[CovertexBasisLetter] = []
            for _ in range(rng.randint(1, 4)):
                w = random_word(rng.randrange(1 << 30), side, 4)
                t = w * ~retraction_image(w, {"b"})
                if letters and is_equal(g, letters[-1].conjugator, t):
                    continue
                letters.append(CovertexBasisLetter(t, rng.choice((1, -1, 2, -2))))
            expanded = covertex_expand(g, "c", letters)
            self.assertFalse(is_trivial(g, expanded), format_word(expanded))
            back = covertex_rewrite(g, "c", expanded)
            self.assertEqual([ltr.exponent for ltr in back], [ltr.exponent for ltr in letters])
            for got, want in zip(back, letters):
                self.assertTrue(is_equal(g, got.conjugator, want.conjugator))
            checked += 1


class FreeBasisDisjointnessTest(unittest.TestCase):
    """On the triangle, D = Δ - {a@0} and ker ρ_D is free on a@1^j a@0 a@1^-j."""

    def _basis_exponents(self, delta: ArtinGraph, w: Word) -> dict[int, int]:
        sums: dict[int, int] = {}
        for ltr in covertex_rewrite(delta, "a@0", w):
            # the conjugator lies in ⟨a@1⟩ × ⟨b@0⟩ with trivial b@0 part
            j = exponent_sum(ltr.conjugator, "a@1")
            sums[j] = sums.get(j, 0) + ltr.exponent
        return {j: e for j, e in sums.items() if e}

    def test_base_conjugates_use_level_zero_only(self) -> None:
        delta = window_graph(vertex_kernel_graph(triangle(), "x"))
        a0 = Word.gen("a@0")
        for g in reduced_words(("a@0", "b@0"), 3):
            self.assertEqual(self._basis_exponents(delta, a0.conjugate(g)), {0: 1}, format_word(g))

    def test_shifted_conjugates_avoid_level_zero(self) -> None:
        delta = window_graph(vertex_kernel_graph(triangle(), "x"))
        a0, b0 = Word.gen("a@0"), Word.gen("b@0")
        meets = 0
        for l in (-1, 2):
            pivot = a0.conjugate(Word.gen("a@1", l))
            for f in reduced_words(delta.vertices, 4):
                level = exponent_sum(f, "a@1") + l
                for p in (IDENTITY, b0, b0 * ~pivot):
                    got = self._basis_exponents(delta, pivot.conjugate(f * p))
                    self.assertEqual(got, {level: 1}, (l, format_word(f), format_word(p)))
                    if level:
                        self.assertNotIn(0, got)
                    else:
                        meets += 1
        self.assertGreater(meets, 0)


class CovertexTest(unittest.TestCase):
    def test_rewrite_and_expand(self) -> None:
        g = path()
        w = parse_word("a c a^-1 c^-1")
        letters = covertex_rewrite(g, "c", w)
        self.assertEqual([ltr.as_dict() for ltr in letters], [{"conjugator": "a", "exponent": 1}, {"conjugator": "1", "exponent": -1}])
        self.assertTrue(is_equal(g, covertex_expand(g, "c", letters), w))

    def test_conjugators_in_the_link_collapse(self) -> None:
        letters = covertex_rewrite(path(), "c", parse_word("b c b^-1"))
        self.assertEqual([ltr.as_dict() for ltr in letters], [{"conjugator": "1", "exponent": 1}])
        self.assertEqual(covertex_rewrite(path(), "c", parse_word("b c b^-1 c^-1")), [])

    def test_preconditions(self) -> None:
        with self.assertRaises(NotInKernel):
            covertex_rewrite(path(), "c", parse_word("c a"))
        with self.assertRaises(HypothesisViolated):
            covertex_rewrite(path(), "a", parse_word("a"))


if __name__ == "__main__":
    unittest.main()
