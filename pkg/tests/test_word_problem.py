from __future__ import annotations

import unittest

from evenartin.errors import GraphMismatch, StarIsFull
from evenartin.graph import ArtinGraph
from evenartin.word_problem import (
    TAG_X,
    TAG_Y,
    TAG_Z,
    amalgam_reduce,
    dihedral_reduce,
    in_standard_parabolic,
    is_equal,
    is_trivial,
)
from evenartin.words import artin_relator, format_word, parse_word


def triangle() -> ArtinGraph:
    return ArtinGraph.build(["a", "b", "x"], [("a", "x", 4), ("b", "x", 2), ("a", "b", 2)])


def path() -> ArtinGraph:
    return ArtinGraph.build(["a", "b", "c"], [("a", "b", 4), ("b", "c", 2)])


class DihedralReduceTest(unittest.TestCase):
    def test_central_power_is_extracted(self) -> None:
        nf = dihedral_reduce(2, parse_word("a b a b"))
        self.assertEqual(nf.central, 1)
        self.assertEqual(nf.syllables, ())
        self.assertFalse(nf.is_identity)

    def test_relator_reduces_to_identity(self) -> None:
        for m in (2, 4, 6, 8):
            self.assertTrue(dihedral_reduce(m // 2, artin_relator("a", "b", m)).is_identity, m)

    def test_commutator_is_not_identity(self) -> None:
        nf = dihedral_reduce(2, parse_word("a b a^-1 b^-1"))
        self.assertFalse(nf.is_identity)
        self.assertEqual(nf.as_dict()["syllables"], [["c", 1], ["a", -1], ["c", -1], ["a", 1]])

    def test_pair_is_checked(self) -> None:
        with self.assertRaises(GraphMismatch):
            dihedral_reduce(2, parse_word("a b c"))
        with self.assertRaises(ValueError):
            dihedral_reduce(0, parse_word("a"))


class TrivialityTest(unittest.TestCase):
    def test_relators_are_trivial(self) -> None:
        g = triangle()
        for u, v, m in g.edges:
            self.assertTrue(is_trivial(g, artin_relator(u, v, m)))
        self.assertTrue(is_equal(g, parse_word("x a x a"), parse_word("a x a x")))
        self.assertTrue(is_equal(g, parse_word("b x a"), parse_word("x a b")))

    def test_non_trivial_words(self) -> None:
        g = triangle()
        self.assertFalse(is_trivial(g, parse_word("a x a^-1 x^-1")))
        self.assertFalse(is_trivial(g, parse_word("a")))
        self.assertFalse(is_trivial(path(), parse_word("a c a^-1 c^-1")))

    def test_trivial_word_through_the_amalgam(self) -> None:
        self.assertTrue(is_trivial(path(), parse_word("a c b c^-1 b^-1 a^-1")))
        self.assertTrue(is_trivial(path(), parse_word("a b a b a^-1 b^-1 a^-1 b^-1 c b c^-1 b^-1")))

    def test_letters_outside_the_graph(self) -> None:
        with self.assertRaises(GraphMismatch):
            is_trivial(path(), parse_word("d"))

    def test_standard_parabolic_membership(self) -> None:
        g = path()
        self.assertTrue(in_standard_parabolic(g, parse_word("c b c^-1"), {"b"}))
        self.assertFalse(in_standard_parabolic(g, parse_word("a b a^-1"), {"b"}))


class AmalgamReduceTest(unittest.TestCase):
    def test_alternating_blocks(self) -> None:
        fac = amalgam_reduce(path(), "a", parse_word("a c a^-1"))
        self.assertEqual([b.tag for b in fac.blocks], [TAG_X, TAG_Y, TAG_X])
        self.assertEqual(fac.geodesic_length, 3)
        self.assertEqual(fac.product(), parse_word("a c a^-1"))
        self.assertEqual([format_word(p) for p in fac.prefixes()], ["a", "a c", "a c a^-1"])

    def test_leading_link_letters_join_the_first_block(self) -> None:
        fac = amalgam_reduce(path(), "a", parse_word("b c"))
        self.assertEqual(len(fac.blocks), 1)
        self.assertEqual(fac.blocks[0].tag, TAG_Y)
        self.assertEqual(format_word(fac.blocks[0].word), "b c")

    def test_block_inside_the_link_is_absorbed(self) -> None:
        fac = amalgam_reduce(path(), "a", parse_word("a c b c^-1 a"))
        self.assertEqual([b.tag for b in fac.blocks], [TAG_X])
        self.assertTrue(is_equal(path(), fac.blocks[0].word, parse_word("a b a")))

    def test_word_in_the_link(self) -> None:
        fac = amalgam_reduce(path(), "a", parse_word("b^2"))
        self.assertEqual(fac.blocks[0].tag, TAG_Z)
        self.assertEqual(fac.geodesic_length, 0)
        self.assertEqual(fac.as_dict()["Z"], ["b"])

    def test_full_star_is_rejected(self) -> None:
        with self.assertRaises(StarIsFull):
            amalgam_reduce(path(), "b", parse_word("a"))


if __name__ == "__main__":
    unittest.main()
