import json

import numpy as np
import pytest

from oracle import class_count, commuting_pairs, naive_counts
from wordmaps.counting import distribution
from wordmaps.groups import (
    FiniteGroup,
    GroupError,
    NotNilpotentError,
    abelian,
    all_abelian_groups,
    center,
    conjugacy_class_count,
    cyclic,
    derived_subgroup,
    dihedral,
    direct_product,
    evaluate,
    exponent,
    from_cayley_json,
    heisenberg,
    inversion_action,
    is_p_group,
    modular16,
    nilpotency_class,
    parse_group,
    quaternion8,
    semidirect_product,
    sylow_decomposition,
    symmetric3,
    to_cayley_json,
)
from wordmaps.words import Word, parse_word

FINGERPRINT = ["x1", "x1^2", "x1^3", "x1^4", "[x1,x2]", "x1^2*x2^2", "x1*x2*x1^-1*x2"]


def fingerprint(G):
    """Isomorphism invariant: identity count and sorted value counts per word."""
    out = []
    for w in FINGERPRINT:
        d = distribution(G, parse_word(w, 2))
        out.append((d.count(0), sorted(d.counts.tolist())))
    return out


def same_distributions(G, H):
    return G.order == H.order and fingerprint(G) == fingerprint(H)


def test_cyclic():
    assert cyclic(1).order == 1
    assert cyclic(4).mul(1, 1) == 2
    assert nilpotency_class(cyclic(1)) == 0
    assert same_distributions(abelian([2, 3]), cyclic(6))


@pytest.mark.parametrize("G, order, exp, classes, cls", [
    (dihedral(8), 8, 4, 5, 2),
    (quaternion8(), 8, 4, 5, 2),
    (modular16(), 16, 8, 10, 2),
    (heisenberg(3, 1), 27, 3, 11, 2),
    (heisenberg(2, 1), 8, 4, 5, 2),
    (heisenberg(5, 1), 125, 5, 29, 2),
    (symmetric3(), 6, 6, 3, None),
    (dihedral(16), 16, 8, 7, 3),
    (abelian([4, 2]), 8, 4, 8, 1),
])
def test_invariants(G, order, exp, classes, cls):
    assert G.order == order
    assert exponent(G) == exp == int(np.lcm.reduce(G.element_orders))
    assert conjugacy_class_count(G) == classes == class_count(G)
    assert nilpotency_class(G) == cls


def test_subgroups():
    D4 = dihedral(8)
    assert len(derived_subgroup(D4)) == 2
    H = heisenberg(3, 1)
    assert len(derived_subgroup(H)) == 3 and len(center(H)) == 3
    assert set(derived_subgroup(H)) == set(center(H))


def test_heisenberg_2_1_matches_d4():
    assert same_distributions(heisenberg(2, 1), dihedral(8))
    assert not same_distributions(quaternion8(), dihedral(8))


def test_direct_product():
    D4 = dihedral(8)
    G = direct_product(D4, cyclic(3))
    assert G.order == 24 and nilpotency_class(G) == 2
    assert same_distributions(direct_product(cyclic(1), D4), D4)


def test_semidirect_constructions():
    A, H = cyclic(4), cyclic(2)
    G = semidirect_product(A, H, inversion_action(A, H, lambda h: h == 1))
    assert same_distributions(G, dihedral(8))
    S = semidirect_product(cyclic(3), H, inversion_action(cyclic(3), H, lambda h: h == 1))
    assert S.order == 6 and not S.is_abelian() and conjugacy_class_count(S) == 3
    T = semidirect_product(A, H, inversion_action(A, H, lambda h: False))
    assert (T.table == direct_product(A, H).table).all()


def test_semidirect_rejects_bad_actions():
    A, H = cyclic(4), cyclic(2)
    with pytest.raises(GroupError):  # not an automorphism
        semidirect_product(A, H, [[0, 1, 2, 3], [0, 2, 1, 3]])
    with pytest.raises(GroupError):  # not a homomorphism from Z/3
        semidirect_product(cyclic(3), cyclic(3), [[0, 1, 2], [0, 2, 1], [0, 2, 1]])
    with pytest.raises(GroupError):
        semidirect_product(symmetric3(), H, [list(range(6))] * 2)


def test_sylow():
    parts = sylow_decomposition(cyclic(12))
    assert [P.order for P in parts] == [4, 3]
    G = direct_product(dihedral(8), cyclic(9))
    parts = sylow_decomposition(G)
    assert [P.order for P in parts] == [8, 9]
    assert conjugacy_class_count(parts[0]) == 5 and parts[1].is_abelian()
    assert all(is_p_group(P) for P in parts)
    with pytest.raises(NotNilpotentError):
        sylow_decomposition(symmetric3())


def test_all_abelian_groups():
    gs = all_abelian_groups(16)
    per_order = {}
    for G in gs:
        per_order[G.order] = per_order.get(G.order, 0) + 1
    assert per_order == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 1, 7: 1, 8: 3, 9: 2, 10: 1,
                         11: 1, 12: 2, 13: 1, 14: 1, 15: 1, 16: 5}
    assert all(G.is_abelian() for G in gs)


def test_evaluate():
    D4 = dihedral(8)
    assert evaluate(Word(1, ()), D4, [3]).index == 0
    assert evaluate(parse_word("[x1,x2]"), D4, [1, 2]).index == 0
    r = 1
    assert evaluate(parse_word("x1^2"), D4, [r]).index == D4.mul(r, r)
    g = D4[r]
    assert (g * g) == evaluate(parse_word("x1^2"), D4, [g])


def test_commuting_pairs_identity():
    for G in (dihedral(8), quaternion8(), symmetric3(), modular16()):
        assert commuting_pairs(G) == G.order * conjugacy_class_count(G)


def test_table_validation():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[1, 0], [0, 1]])
    bad = np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(GroupError):
        FiniteGroup(bad)


def test_cayley_json_round_trip(tmp_path):
    Q = quaternion8()
    data = to_cayley_json(Q)
    assert from_cayley_json(json.loads(json.dumps(data))).table.tolist() == Q.table.tolist()
    # identity not at index 0: relabel
    perm = [3, 0, 1, 2]
    t = [[perm.index((perm[a] + perm[b]) % 4) for b in range(4)] for a in range(4)]
    G = from_cayley_json({"table": t})
    assert G.table[0].tolist() == [0, 1, 2, 3]
    assert sorted(naive_counts(G, parse_word("x1^2"))) == sorted(naive_counts(cyclic(4), parse_word("x1^2")))
    assert naive_counts(G, parse_word("x1^4"))[0] == 4
    (tmp_path / "q8.json").write_text(json.dumps(data))
    assert parse_group("cayley:file=q8.json", tmp_path).order == 8
    with pytest.raises(GroupError):
        from_cayley_json({"table": [[0, 1], [1, 0]], "order": 3})


@pytest.mark.parametrize("spec, order", [
    ("cyclic:5", 5), ("abelian:2,4", 8), ("heisenberg:p=3,k=1", 27), ("heisenberg:p=2", 8),
    ("dihedral:8", 8), ("quaternion:8", 8), ("modular:16", 16), ("symmetric:3", 6),
    ("product:(dihedral:8)x(cyclic:3)", 24), ("product:(product:(cyclic:2)x(cyclic:2))x(cyclic:3)", 12),
])
def test_parse_group(spec, order):
    G = parse_group(spec)
    assert G.order == order and G.name == spec


def test_parse_semidirect(tmp_path):
    spec = {"A": "cyclic:3", "H": "cyclic:2", "action": [[0, 1, 2], [0, 2, 1]]}
    (tmp_path / "s3.json").write_text(json.dumps(spec))
    G = parse_group("semidirect:file=s3.json", tmp_path)
    assert same_distributions(G, symmetric3())


@pytest.mark.parametrize("spec", ["nope:3", "cyclic:x", "heisenberg:k=1", "quaternion:16", "product:(cyclic:2)"])
def test_parse_group_errors(spec):
    with pytest.raises(GroupError):
        parse_group(spec)
