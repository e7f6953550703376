"""Automata: pattern recognizers, products, and the clump construction."""

from fractions import Fraction as F

import pytest

from kmerwait.automata import (
    ClumpAutomaton,
    Dfa,
    bnn_probability,
    bnn_scan,
    clump_automaton,
    clump_moment_series,
    clump_series,
    complement,
    dfa_series,
    ends_with_dfa,
    gf_from_clump_automaton,
    kmp_automaton,
    markov_property_check,
    occurs_before_end_dfa,
    product,
    state_marks,
    to_dot,
    transfer_matrix,
    universal_dfa,
)
from kmerwait.languages import clump_gf_language, rs_solve
from kmerwait.oracle import avoid_weight, enumerate_census
from kmerwait.words import Alphabet, putative_hit_count

from conftest import BIASED, TOYS, UNIFORM


def all_words(n):
    for x in range(2 ** n):
        yield "".join("AC"[(x >> i) & 1] for i in range(n))


def test_kmp_automaton_tracks_borders(ac):
    dfa = kmp_automaton("ACAC", ac)
    assert dfa.n_states == 5
    assert dfa.run("ACAC") == 4
    assert dfa.run("ACACA") == 4  # the occurrence state is absorbing
    assert dfa.run("AACA") == 3  # longest suffix that is a prefix: ACA
    assert dfa.run("CCC") == 0
    assert dfa.accepts("AACAC")
    assert not dfa.accepts("ACCA")


def test_kmp_avoidance_series(ac):
    """Complement of the occurrence recognizer counts avoiding texts."""
    dfa = complement(kmp_automaton("AAC", ac))
    weights = {"A": F(1, 2), "C": F(1, 2)}
    series = dfa_series(dfa, weights, 10)
    # the final (occurrence) state is absorbing, so acceptance means the
    # prefix read so far stayed clear
    for n in range(11):
        assert series[n] == avoid_weight(("AAC",), n, ac, UNIFORM)


def test_ends_with_and_occurs_before_end(ac):
    e = ends_with_dfa("ACA", ac)
    assert e.accepts("CCACA") and not e.accepts("ACAC")
    o = occurs_before_end_dfa("ACA", ac)
    assert o.accepts("ACAC") and not o.accepts("ACA")
    assert o.accepts("ACAA")


def test_first_occurrence_series_via_product(ac):
    """Ends-with minus occurs-before-end picks out first occurrences,
    matching the language route's R."""
    b = "AAA"
    e = ends_with_dfa(b, ac)
    o = occurs_before_end_dfa(b, ac)
    first = product(e, complement(o), lambda x, y: x and y)
    weights = {"A": F(1, 2), "C": F(1, 2)}
    series = dfa_series(first, weights, 12)
    lang = rs_solve((b,), ac, UNIFORM)
    want = lang.R[0].taylor(1, 12)
    assert series == want


def test_product_with_universal_is_isomorphic(ac):
    dfa = kmp_automaton("ACC", ac)
    prod = product(dfa, universal_dfa(ac), lambda x, y: x and y)
    assert prod.n_states == dfa.n_states
    for w in all_words(8):
        assert prod.accepts(w) == dfa.accepts(w)


def test_paired_product_diagonal(ac):
    """Reading pairs, the synchronized diagonal stays small while the full
    pair alphabet is quadratic."""
    a = kmp_automaton("AC", ac)
    prod = product(a, a, lambda x, y: x and y, paired=True)
    assert len(prod.alphabet) == 4
    # feeding equal pairs keeps both components in lockstep
    st = prod.initial
    for s in (("A", "A"), ("C", "C")):
        st = prod.step(st, s)
    p, q = prod.pair_labels[st]
    assert p == q


def test_clump_automaton_aaa_structure(ac, autos):
    ca = autos["AAA"]
    assert ca.dfa.n_states == 17
    labels = set(ca.labels)
    assert len(labels) == 17
    ebar = {ca.labels[i] for i in ca.Ebar}
    assert ebar == {"", "A", "AA", "AC", "C", "CA"}
    occ = {ca.labels[i] for i in ca.O}
    assert occ == {"AAC", "ACA", "CAA", "AACA", "ACAA", "CAAC",
                   "AACAA", "ACAAC", "ACACA", "CAACA"}
    assert len(ca.pruned) == 4


def test_clump_automaton_aaa_marks(ac, autos):
    ca = autos["AAA"]
    marked = {ca.labels[i] for i in range(ca.dfa.n_states)
              if ca.state_mark[i]}
    assert marked == {"AAC", "ACA", "CAA", "ACAAC", "ACACA", "CAAC"}


def test_clump_automaton_aaa_theta(ac, autos):
    ca = autos["AAA"]
    theta = {ca.labels[i]: ca.theta[i] for i in ca.theta}
    assert theta == {
        "AAC": "AAC", "ACA": "ACA", "CAA": "CAA",
        "AACA": "A", "ACAA": "A", "CAAC": "C",
        "AACAA": "AA", "ACAAC": "AAC", "ACACA": "ACA", "CAACA": "A",
    }


@pytest.mark.parametrize("b", TOYS)
def test_markov_property(autos, b):
    assert markov_property_check(autos[b])


def test_markov_property_detects_corruption(ac, autos):
    ca = autos["AAA"]
    delta = dict(ca.dfa.delta)
    # reroute CA --A--> so that two different 3-letter histories land on
    # the state labelled AAC
    src = ca.labels.index("CA")
    tgt = ca.labels.index("AAC")
    delta[(src, "A")] = tgt
    bad_dfa = Dfa(ca.dfa.n_states, ca.dfa.alphabet, delta, ca.dfa.initial,
                  ca.dfa.finals)
    bad = ClumpAutomaton(ca.b, ca.alphabet, bad_dfa, ca.labels, ca.O,
                         ca.Ebar, ca.theta, ca.marks, ca.state_mark,
                         ca.mark, ca.pruned)
    assert not markov_property_check(bad)


@pytest.mark.parametrize("b", TOYS)
def test_run_marks_count_putative_hits(ac, autos, b):
    """Exhaustively over short texts, the marks collected along a run
    equal the putative-hit count; dying runs are exactly the texts with an
    occurrence of b."""
    ca = autos[b]
    for n in range(1, 13):
        for w in all_words(n):
            st = ca.dfa.initial
            marks = 0
            for letter in w:
                st = ca.dfa.step(st, letter)
                if st is None:
                    break
                marks += ca.state_mark[st]
            if b in w:
                assert st is None
            else:
                assert st is not None
                assert marks == putative_hit_count(w, b, ca.alphabet)


def test_transfer_matrix_rows(ac, autos):
    tm = transfer_matrix(autos["AAA"], UNIFORM)
    assert tm.size == 17
    full = sum(1 for row in tm.rows if sum(w for w, _ in row.values()) == 1)
    assert full == 17 - 4  # four rows lost a pruned transition


@pytest.mark.parametrize("b", TOYS)
@pytest.mark.parametrize("nu", [UNIFORM, BIASED], ids=["uniform", "biased"])
def test_census_vs_enumeration(autos, ac, b, nu):
    rows = clump_series(autos[b], nu, 9)
    for n in range(10):
        assert rows[n] == dict(enumerate_census(b, n, ac, nu).census)


def test_moment_series_exact_and_float(autos):
    ca = autos["ACAC"]
    fbar, hits = clump_moment_series(ca, UNIFORM, 40)
    fbarf, hitsf = clump_moment_series(ca, UNIFORM, 40, exact=False)
    for n in range(41):
        assert abs(float(fbar[n]) - fbarf[n]) < 1e-12
        assert abs(float(hits[0][n]) - hitsf[0][n]) < 1e-12
    # avoiding mass never increases
    for n in range(40):
        assert fbar[n + 1] <= fbar[n]


def test_gf_routes_agree_exactly(ac, autos):
    for b in ("AAA", "ACC"):
        g1 = clump_gf_language(b, ac, UNIFORM)
        g2 = gf_from_clump_automaton(autos[b], UNIFORM)
        assert g1 == g2


def test_bnn_exact_toy(binu):
    # 64 texts of length 6 over the swap model: 22 avoid AAA, of which 9
    # pick up an occurrence after one full swap
    p = bnn_probability("AAA", 6, binu)
    assert p == pytest.approx(9 / 22, abs=1e-15)


def test_bnn_monotone_in_rate(ac):
    from kmerwait.evolution import ModelParams
    last = 0.0
    for k in (4, 3, 2):
        eps = F(1, 10 ** k)
        p1 = {"A": {"A": 1 - eps, "C": eps}, "C": {"A": eps, "C": 1 - eps}}
        params = ModelParams(ac, dict(UNIFORM), p1)
        p = bnn_probability("AACA", 30, params)
        assert p > last
        last = p


def test_bnn_scan_matches_single_route(table1):
    words = ("AAAA", "ACGT", "TTTT", "CGCG")
    probs = bnn_scan(words, 200, table1)
    for w, p in zip(words, probs):
        single = bnn_probability(w, 200, table1)
        assert p == pytest.approx(single, rel=1e-12)


def test_bnn_mpmath_shadow(table1):
    for w in ("AAAAA", "CGCGC", "TTTTT"):
        pf = bnn_probability(w, 1000, table1)
        pm = float(bnn_probability(w, 1000, table1, dps=40))
        assert abs(pf - pm) / pm < 1e-10


def test_to_dot_smoke(autos):
    dot = to_dot(autos["AAA"])
    assert dot.startswith("digraph")
    assert "->" in dot
    assert "AACAA" in dot
