import json
import random
from fractions import Fraction

import pytest

from oracle import commuting_pairs, naive_counts
from wordmaps.counting import (
    BudgetExceeded,
    abelian_count,
    abelian_image,
    count_solutions,
    direct_product_distribution,
    distribution,
    distribution_json,
    probability,
    semidirect_count,
    sylow_distribution,
    theorem_count_bound,
)
from wordmaps.groups import (
    GroupError,
    abelian,
    conjugacy_class_count,
    cyclic,
    dihedral,
    direct_product,
    heisenberg,
    inversion_action,
    quaternion8,
    semidirect_product,
    symmetric3,
)
from wordmaps.reduction import canonicalize
from wordmaps.words import Word, parse_word, random_word

D4 = dihedral(8)


def test_known_values():
    assert count_solutions(cyclic(2), parse_word("x1^2")) == 2
    assert probability(cyclic(2), parse_word("x1^2")) == 1
    assert count_solutions(D4, parse_word("[x1,x2]")) == 40 == D4.order * conjugacy_class_count(D4)
    assert count_solutions(D4, parse_word("x1^2")) == 6
    assert probability(D4, parse_word("x1^2")) == Fraction(3, 4)
    assert count_solutions(heisenberg(3, 1), parse_word("x1^3")) == 27


def test_vectorised_oracle_matches_naive():
    rng = random.Random(2)
    for G in (D4, quaternion8(), symmetric3(), heisenberg(3, 1)):
        for _ in range(15):
            w = random_word(rng, 2, 7, 4)
            assert distribution(G, w).counts.tolist() == naive_counts(G, w)


def test_blocks_and_threads_agree(monkeypatch):
    import wordmaps.counting as counting
    w = parse_word("x1^2*x2*[x1,x3]")
    ref = distribution(D4, w)
    monkeypatch.setattr(counting, "BLOCK", 37)
    assert distribution(D4, w, jobs=3) == ref
    assert ref.total == 8**3


def test_budget():
    with pytest.raises(BudgetExceeded):
        distribution(D4, parse_word("x1*x2*x3*x4"), budget=1000)


def test_empty_word_and_padding():
    d = distribution(D4, Word(2, ()))
    assert d.count(0) == 64 and d.probability(0) == 1
    w = parse_word("x1^2")
    d1, d3 = distribution(D4, w), distribution(D4, w.with_rank(3))
    assert (d3.counts == d1.counts * 64).all()
    assert d3.probability(0) == d1.probability(0)


def test_conjugation_invariance():
    w = parse_word("x1^2*x2^-1*x1*x2^3")
    for G in (D4, symmetric3()):
        d = distribution(G, w)
        for c in range(G.order):
            for g in range(G.order):
                conj = G.mul(G.mul(G.inv(g), c), g)
                assert d.count(c) == d.count(conj)


def test_abelian_examples():
    Z4 = cyclic(4)
    assert sorted(abelian_image(Z4, parse_word("x1^2"))) == [0, 2]
    d = abelian_count(Z4, parse_word("x1^2"))
    assert d.count(0) == 2 and d.count(2) == 2
    d = abelian_count(abelian([2, 2]), parse_word("x1*x2"))
    assert d.counts.tolist() == [4, 4, 4, 4]
    with pytest.raises(GroupError):
        abelian_count(D4, parse_word("x1"))


def test_direct_product_examples():
    w = parse_word("[x1,x2]")
    G = direct_product(D4, cyclic(3))
    d = direct_product_distribution(distribution(D4, w), distribution(cyclic(3), w), G)
    assert d == distribution(G, w)
    assert d.probability() == distribution(D4, w).probability() * distribution(cyclic(3), w).probability()
    t = direct_product_distribution(distribution(cyclic(1), w), distribution(D4, w))
    assert t.counts.tolist() == distribution(D4, w).counts.tolist()
    with pytest.raises(ValueError):
        direct_product_distribution(distribution(D4, w), distribution(D4, parse_word("x1")))


def test_sylow_distribution():
    G = direct_product(D4, cyclic(9))
    for text in ["x1^2*x2^3", "[x1,x2]^2*x1^6"]:
        w = parse_word(text)
        assert sylow_distribution(G, w) == distribution(G, w)


def test_semidirect_examples():
    Z2 = cyclic(2)
    r = semidirect_count(Z2, Z2, inversion_action(Z2, Z2, lambda h: False), parse_word("x1^2"))
    assert r.exact == 4
    Z4 = cyclic(4)
    act = inversion_action(Z4, Z2, lambda h: h == 1)
    assert semidirect_count(Z4, Z2, act, parse_word("x1^2")).exact == 6
    Z3 = cyclic(3)
    act3 = inversion_action(Z3, Z2, lambda h: h == 1)
    S = semidirect_product(Z3, Z2, act3)
    r = semidirect_count(Z3, Z2, act3, parse_word("[x1,x2]"))
    assert r.exact == 18 == commuting_pairs(S)
    assert r.lower_bound <= r.exact
    assert Fraction(r.lower_bound, 36) >= Fraction(1, 6)


def test_semidirect_against_brute_force():
    rng = random.Random(4)
    Z4, Z2 = cyclic(4), cyclic(2)
    act = inversion_action(Z4, Z2, lambda h: h == 1)
    G = semidirect_product(Z4, Z2, act)
    for _ in range(15):
        w = random_word(rng, 3, 6, 3)
        r = semidirect_count(Z4, Z2, act, w)
        assert r.exact == naive_counts(G, w)[0]
        assert r.lower_bound <= r.exact


def test_semidirect_rejects_nonabelian_kernel():
    with pytest.raises(GroupError):
        semidirect_count(symmetric3(), cyclic(1), [list(range(6))], parse_word("x1"))


def test_theorem_count_bound():
    cw = canonicalize(Word(1, ()), 2, 2)
    rep = theorem_count_bound(D4, cw)
    assert rep.n_identity == 8 and rep.bound == 1 and rep.holds
    rep = theorem_count_bound(D4, canonicalize(parse_word("[x1,x2]"), 2, 2))
    assert rep.n_identity == 40 and rep.bound == 8 and rep.holds
    rep = theorem_count_bound(D4, canonicalize(parse_word("x1^2*[x1,x2]*[x3,x4]"), 2, 2))
    assert rep.holds and rep.fibration_linear and rep.fibre_ok and rep.fibration_checked > 0
    with pytest.raises(GroupError):
        theorem_count_bound(dihedral(16), cw)


def test_distribution_json():
    w = parse_word("x1^2")
    d = distribution(D4, w)
    data = json.loads(distribution_json(d, w))
    assert data["probability_identity"] == "3/4"
    assert data["rank"] == 1 and sum(data["counts"].values()) == 8
    assert data["counts"] == {"1": 6, "r^2": 2}  # zero counts are omitted
