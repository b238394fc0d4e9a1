import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordmaps.counting import distribution
from wordmaps.groups import abelian, cyclic, dihedral, direct_product, heisenberg, modular16, quaternion8
from wordmaps.normal_form import NormalForm, collect, nf_equal_mod_R, nf_substitute, nf_to_word
from wordmaps.reduction import (
    Substitution,
    burnside_valid,
    canonical_indices_disjoint,
    canonical_word,
    canonicalize,
    congruent_after_substitution,
    decompose_exponent,
    lemma_commutator_pairing,
    lemma_power_reduce,
    witness_decreasing,
)
from wordmaps.verification import g_equivalent
from wordmaps.words import Word, parse_word, random_word

D4, Q8 = dihedral(8), quaternion8()


def equivalent(G, w, nf):
    return g_equivalent(G, w, nf_to_word(nf))


@pytest.mark.parametrize("a, p, out", [(12, 2, (2, 3)), (7, 7, (1, 1)), (-18, 3, (2, -2)), (5, 2, (0, 5))])
def test_decompose_exponent(a, p, out):
    assert decompose_exponent(a, p) == out


def test_decompose_zero():
    with pytest.raises(ValueError):
        decompose_exponent(0, 3)


def test_burnside_examples():
    ok = Substitution(2, {1: parse_word("x1*x2^2"), 2: parse_word("x2")}, 2)
    assert ok.matrix() == [[1, 2], [0, 1]]
    assert burnside_valid(ok)
    bad = Substitution(2, {1: parse_word("x1^2", 2), 2: parse_word("x2")}, 2)
    assert not burnside_valid(bad)
    assert burnside_valid(Substitution(2, {1: parse_word("x1^2", 2), 2: parse_word("x2")}, 3))


def test_power_lemma_example():
    nf = NormalForm.from_data((2, 4))
    s, out = lemma_power_reduce(nf, 2, 2)
    assert str(s.images[1]) == "x1*x2^2"
    assert out.alpha == (2, 0)
    assert burnside_valid(s)
    v = nf_to_word(out)
    for G in (D4, Q8):
        assert g_equivalent(G, parse_word("x1^2*x2^4"), v)


def test_power_lemma_unit_exponent():
    nf = NormalForm.from_data((1, 3, 2), {(2, 3): 1})
    s, out = lemma_power_reduce(nf, 3, 1)
    assert out.alpha == (1, 0, 0)
    assert burnside_valid(s)
    assert equivalent(heisenberg(3, 1), nf_to_word(nf), out)


def test_power_lemma_trivial():
    nf = NormalForm.from_data((0, 4), {(1, 2): 5})
    s, out = lemma_power_reduce(nf, 2, 2)
    assert all(str(s.images[j]) == f"x{j}" for j in (1, 2))
    assert out == nf.reduce(4)


def test_pairing_already_paired():
    s, cw = lemma_commutator_pairing(NormalForm.from_data((0, 0), {(1, 2): 1}), 2, 2)
    assert cw.pairs == ((1, 2, 1),)
    assert all(str(s.images[j]) == f"x{j}" for j in (1, 2))


def test_pairing_example():
    nf = NormalForm.from_data((0, 0, 0), {(1, 2): 2, (1, 3): 1})
    s, cw = lemma_commutator_pairing(nf, 2, 2)
    assert cw.pairs == ((1, 3, 1),)
    # [x1,x2]^2 already lies in gamma_3 F^4, so x3 needs no correction
    assert str(s.images[3]) in ("x3", "x2^2*x3")
    assert burnside_valid(s)
    w = parse_word("[x1,x2]^2*[x1,x3]")
    v = canonical_word(cw)
    for G in (direct_product(D4, cyclic(2)), Q8):
        assert g_equivalent(G, w, v)


def test_pairing_absorbs_into_minimal_valuation():
    nf = NormalForm.from_data((0, 0, 0), {(1, 2): 3, (1, 3): 1})
    s, cw = lemma_commutator_pairing(nf, 3, 2)
    assert cw.pairs == ((1, 3, 1),)
    assert str(s.images[3]) == "x2^3*x3"
    G = direct_product(heisenberg(3, 1), cyclic(3))
    assert g_equivalent(G, parse_word("[x1,x2]^3*[x1,x3]"), canonical_word(cw))


def test_pairing_empty_and_rejects_powers():
    _, cw = lemma_commutator_pairing(NormalForm.identity(3), 2, 1)
    assert cw.pairs == ()
    with pytest.raises(ValueError):
        lemma_commutator_pairing(NormalForm.from_data((1, 0)), 2, 2)


def test_pairing_needs_recursion():
    # valuations force the chain through more than one step
    nf = NormalForm.from_data((0,) * 4, {(1, 2): 4, (2, 3): 2, (3, 4): 1})
    s, cw = lemma_commutator_pairing(nf, 2, 4)
    assert burnside_valid(s) and canonical_indices_disjoint(cw) and witness_decreasing(cw)
    assert len(cw.pairs) == 2


def test_canonicalize_examples():
    cw = canonicalize(parse_word("x1"), 2, 2)
    assert cw.power_part == (1, 1) and cw.pairs == () and cw.residual is None
    cw = canonicalize(parse_word("[x1,x2]"), 2, 2)
    assert cw.power_part is None and len(cw.pairs) == 1
    w = parse_word("x1^2*x2^4*[x1,x2]^3")
    cw = canonicalize(w, 2, 2)
    v = canonical_word(cw)
    for G in (D4, Q8, abelian([4, 2]), modular16()):
        assert g_equivalent(G, w, v)


def test_canonicalize_degenerate():
    for text in ["1", "x1^4*x2^8", "[x1,x2]^2"]:
        cw = canonicalize(parse_word(text, 2), 2, 2)
        assert canonical_word(cw).letters == ()
        d = distribution(D4, canonical_word(cw))
        assert d.count(0) == D4.order**2


def test_pairing_logs_witness(caplog):
    with caplog.at_level(logging.DEBUG, logger="wordmaps.reduction"):
        canonicalize(parse_word("[x1,x2]^2*[x1,x3]*[x2,x4]^3"), 2, 3)
    assert any("valuation chain" in r.message for r in caplog.records)


words3 = st.lists(st.tuples(st.integers(1, 4), st.integers(-9, 9).filter(bool)), max_size=14)


@settings(max_examples=150, deadline=None)
@given(words3, st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]))
def test_canonicalize_properties(ls, pm):
    p, m = pm
    w = Word.from_letters(ls, 4)
    cw = canonicalize(w, p, m)
    assert burnside_valid(cw.substitution)
    assert canonical_indices_disjoint(cw)
    assert witness_decreasing(cw)
    assert congruent_after_substitution(w, cw)
    q = p**m
    if cw.power_part:
        t, e = cw.power_part
        assert e == p ** decompose_exponent(e, p)[0] % q
    n_vars = 2 * len(cw.pairs) + (1 if cw.power_part else 0)
    assert n_vars <= w.rank


@settings(max_examples=80, deadline=None)
@given(words3)
def test_congruence_certificate_is_exact(ls):
    w = Word.from_letters(ls, 4)
    cw = canonicalize(w, 2, 2)
    imgs = [collect(cw.substitution.images[j], 4) for j in range(1, 5)]
    assert nf_equal_mod_R(nf_substitute(collect(canonical_word(cw), 4), imgs), collect(w), 2, 2)


def test_canonical_json():
    cw = canonicalize(parse_word("x1^2*x2^4*[x1,x2]^3"), 2, 2)
    data = cw.to_json()
    assert data["word"] == str(canonical_word(cw))
    assert set(data["substitution"]) == {"1", "2"}
    assert parse_word(data["word"], 2) == canonical_word(cw)


def test_random_equivalence_small():
    rng = random.Random(5)
    for _ in range(30):
        w = random_word(rng, 2, 8, 5)
        assert g_equivalent(heisenberg(3, 1), w, canonical_word(canonicalize(w, 3, 1)))
