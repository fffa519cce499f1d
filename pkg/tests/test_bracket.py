"""Bracket evaluation checked against two independent oracles.

The first oracle is a transfer-matrix recurrence for two-strand braid words:
the planar algebra on two points has basis {1, e} with e*e = delta*e, a
positive letter acts as A*1 + A^-1*e, a negative letter as A^-1*1 + A*e, and
closing the braid sends 1 to delta^2 and e to delta.  The second oracle
resolves one crossing at a time through the smoothing maps of the diagram
layer, never touching the evaluator's own state walk.
"""

import random
from fractions import Fraction

import pytest

from skeinlab.diagram import (
    LinkDiagram,
    corpus,
    insert_kink_pair,
    parse_braid,
    random_braid_diagram,
    random_move,
)
from skeinlab.bracket import (
    bracket,
    bracket_series,
    bracket_statesum,
    bracket_tl_sweep,
)
from skeinlab.poly import LOOP_VALUE, LaurentPoly

A = LaurentPoly.a_power(1)
A_INV = LaurentPoly.a_power(-1)
DELTA = LOOP_VALUE


def two_strand_oracle(word):
    """Closure of a +-1 braid word on two strands, by the basis recurrence."""
    c1, ce = LaurentPoly.one(), LaurentPoly.zero()
    for s in word:
        if s == 1:
            c1, ce = A * c1, A_INV * c1 + A * ce + A_INV * DELTA * ce
        elif s == -1:
            c1, ce = A_INV * c1, A * c1 + A_INV * ce + A * DELTA * ce
        else:
            raise ValueError(s)
    return c1 * DELTA * DELTA + ce * DELTA


def smoothing_oracle(d: LinkDiagram) -> LaurentPoly:
    """Resolve crossings one at a time; loops of a flat diagram score delta."""
    if d.crossing_count == 0:
        return DELTA ** d.free_loops
    cid = d.crossing_ids()[0]
    return (A * smoothing_oracle(d.smoothed(cid, "A"))
            + A_INV * smoothing_oracle(d.smoothed(cid, "B")))


FROZEN = {
    "unknot": "-A^2 - A^-2",
    "hopf": "A^6 + A^2 + A^-2 + A^-6",
    "trefoil": "A^7 + A^3 + A^-1 - A^-9",
    "figure_eight": "-A^10 - A^-10",
}


class TestOracles:
    def test_corpus_frozen_values(self):
        for name, d in corpus().items():
            assert str(bracket_statesum(d)) == FROZEN[name], name
            assert str(bracket_tl_sweep(d)) == FROZEN[name], name

    def test_two_strand_words_match_recurrence(self):
        words = [[], [1], [-1], [1, 1], [1, -1], [1, 1, 1], [-1, -1, -1],
                 [1, 1, 1, 1], [1, -1, 1, -1]]
        rng = random.Random(20)
        words += [[rng.choice([1, -1]) for _ in range(rng.randint(1, 8))]
                  for _ in range(20)]
        for w in words:
            d = parse_braid(w, 2)
            expected = two_strand_oracle(w)
            assert bracket_statesum(d) == expected, w
            assert bracket_tl_sweep(d) == expected, w

    def test_corpus_matches_smoothing_oracle(self):
        for name, d in corpus().items():
            assert bracket_statesum(d) == smoothing_oracle(d), name

    def test_random_diagrams_match_smoothing_oracle(self):
        rng = random.Random(8)
        for _ in range(15):
            d = random_braid_diagram(rng, max_crossings=7, max_strands=4)
            assert bracket_statesum(d) == smoothing_oracle(d)


class TestAlgebraicStructure:
    def test_skein_recursion_at_every_crossing(self):
        for d in (corpus()["trefoil"], corpus()["figure_eight"]):
            total = bracket(d)
            for cid in d.crossing_ids():
                assert total == (A * bracket(d.smoothed(cid, "A"))
                                 + A_INV * bracket(d.smoothed(cid, "B")))

    def test_disjoint_union_is_multiplicative(self):
        c = corpus()
        for a in ("unknot", "hopf"):
            for b in ("trefoil", "figure_eight"):
                u = c[a].disjoint_union(c[b])
                assert bracket(u) == bracket(c[a]) * bracket(c[b])

    def test_extra_circle_multiplies_by_loop_value(self):
        d = corpus()["trefoil"]
        d2 = LinkDiagram(d.crossings, d.free_loops + 1)
        assert bracket(d2) == DELTA * bracket(d)


class TestMoveBehaviour:
    def test_positive_curl_scales_by_minus_a_cubed(self):
        for d in (corpus()["hopf"], corpus()["trefoil"]):
            arc = sorted(d.arcs())[0]
            before = bracket(d)
            assert bracket(d.apply_move("R1+", arc)) == LaurentPoly.term(-1, 3) * before
            assert bracket(d.apply_move("R1-", arc)) == LaurentPoly.term(-1, -3) * before

    def test_curl_pair_cancels_exactly(self):
        d = corpus()["unknot"]
        assert bracket(insert_kink_pair(d)) == bracket(d)

    def test_random_move_walks_preserve_bracket(self):
        rng = random.Random(17)
        for name, d in corpus().items():
            if d.crossing_count == 0:
                d = insert_kink_pair(d)
            expected = bracket(d)
            for _ in range(40):
                d, move = random_move(d, rng)
                assert bracket(d) == expected, (name, move)


class TestEvaluators:
    def test_sweep_agrees_with_statesum_on_random_diagrams(self):
        rng = random.Random(12)
        for _ in range(30):
            d = random_braid_diagram(rng, max_crossings=10, max_strands=5)
            assert bracket_tl_sweep(d) == bracket_statesum(d)

    def test_crossing_cap_is_enforced(self):
        d = parse_braid([1, 1, 1], 2)
        with pytest.raises(ValueError):
            bracket_statesum(d, max_crossings=2)
        with pytest.raises(ValueError):
            bracket(d, method="statesum", max_crossings=2)

    def test_width_cap_falls_back_in_auto_mode(self):
        d = parse_braid([1, 1, 1], 2)
        with pytest.raises(ValueError):
            bracket_tl_sweep(d, max_width=1)
        assert bracket(d, method="auto", max_width=1) == bracket_statesum(d)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            bracket(corpus()["unknot"], method="magic")


class TestSeries:
    def test_unknot_series(self):
        s = bracket_series(corpus()["unknot"], order=2)
        assert [s.coeff(j) for j in range(3)] == [
            Fraction(-2), Fraction(0), Fraction(-1, 4)]

    def test_series_constant_term_is_classical_evaluation(self):
        for d in corpus().values():
            assert bracket_series(d, order=1).constant_term() == bracket(d).eval_at(-1)
