import json
import random

import pytest

from wordmaps.groups import GroupError, abelian, dihedral, direct_product, cyclic, heisenberg, quaternion8, symmetric3
from wordmaps.verification import (
    class_two_parameters,
    dedupe_by_collection,
    g_equivalent,
    pad,
    run_census,
    verify_canonicalization,
)
from wordmaps.words import Word, enumerate_words, parse_word, random_word

D4, H3 = dihedral(8), heisenberg(3, 1)


def test_g_equivalent_examples():
    assert g_equivalent(D4, parse_word("x2*x1"), parse_word("x1*x2*[x2,x1]"))
    assert g_equivalent(H3, parse_word("x1"), parse_word("x1^4"))
    assert g_equivalent(H3, parse_word("x1"), parse_word("x1^2"))
    assert not g_equivalent(H3, parse_word("[x1,x2]"), parse_word("x1^3", 2))
    # padding: x1 against a word in two variables
    assert g_equivalent(D4, parse_word("x1"), parse_word("x1*[x1,x2]^2"))


def test_pad():
    assert pad(parse_word("x1"), 3).rank == 3
    with pytest.raises(ValueError):
        pad(parse_word("x3"), 2)


def test_class_two_parameters():
    assert class_two_parameters(D4) == (2, 2)
    assert class_two_parameters(H3) == (3, 1)
    with pytest.raises(GroupError):
        class_two_parameters(cyclic(6))


def test_verify_examples():
    rng = random.Random(8)
    for G, p, m in [(D4, 2, 2), (H3, 3, 1)]:
        for _ in range(20):
            w = random_word(rng, 2, 8, 4)
            rep = verify_canonicalization(G, w, p, m)
            assert rep.passed, rep
    rep = verify_canonicalization(abelian([4, 4]), parse_word("x1^2*x2^2*[x1,x2]"), 2, 2)
    assert rep.passed
    assert json.loads(json.dumps(rep.to_json()))["passed"]


def test_verify_rejects_groups_outside_the_class():
    w = parse_word("x1")
    with pytest.raises(GroupError):
        verify_canonicalization(dihedral(16), w, 2, 3)
    with pytest.raises(GroupError):
        verify_canonicalization(D4, w, 2, 1)
    with pytest.raises(GroupError):
        verify_canonicalization(D4, w, 3, 2)


def test_census_small():
    words = dedupe_by_collection(enumerate_words(2, 2, [-2, -1, 1, 2]))
    groups = [D4, quaternion8(), dihedral(16), direct_product(D4, cyclic(3)), symmetric3()]
    rep = run_census(groups, words)
    assert rep.ok, rep.to_text()
    for row in rep.rows:
        kind = row.group
        if kind in ("dihedral:16", "symmetric:3"):
            assert row.canonical_ok is None
        else:
            assert row.canonical_ok is True
        if row.word == "1":
            assert row.probability == 1
    assert {r.method for r in rep.rows if r.group.startswith("product")} == {"sylow"}


def test_census_reports_errors_and_continues():
    rep = run_census([D4], [parse_word("x1*x2*x3*x4*x5*x6*x7*x8*x9")], budget=10**4)
    assert len(rep.errors) == 1 and "BudgetExceeded" in rep.rows[0].error
    assert not rep.ok


def test_census_is_deterministic():
    words = [random_word(random.Random(1), 2, 5, 3) for _ in range(10)]
    a = run_census([D4, H3], words)
    b = run_census([D4, H3], words, jobs=4)
    assert a.to_json() == b.to_json()
    assert a.to_csv().splitlines()[0].startswith("group,word,rank,N,total,P,bound,pass")
    assert "runtime" in a.to_csv(timing=True).splitlines()[0]


def test_dedupe():
    ws = [parse_word("x1*x2", 2), parse_word("x2*x1*[x1,x2]"), Word(2, ())]
    assert dedupe_by_collection(ws) == [ws[0], ws[2]]
