"""Rewriting class-2 words into a canonical shape by changes of variables.

Working modulo ``R = gamma_3(F_n) F_n^q`` with ``q = p^m``, a word is brought
to the form

    y_t^(p^l) * prod_k [y_a_k, y_b_k]^(u_k) * [y_t, h]

with disjoint commutator pairs, where the ``y`` are new variables given as
words in the old ones.  Each elementary step replaces one variable ``x_t`` by
``y_t = A x_t^e B`` with ``A, B`` free of ``x_t`` and ``p`` not dividing
``e``; its inverse modulo ``R`` is ``x_t = (A^-1 y_t B^-1)^r`` with
``r = e^-1 mod q``.  Such a substitution is invertible on every group of class
at most 2 and exponent dividing ``q``, so the word map's value distribution
is unchanged.

Exponents are never transcribed from closed formulas; after every step the
collected form is recomputed exactly in the free class-2 group.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .normal_form import NormalForm, collect, commutator_modulus, nf_substitute, nf_to_word, render
from .words import Word, commutator_word, concat, power

log = logging.getLogger(__name__)


def decompose_exponent(a: int, p: int) -> tuple[int, int]:
    """Split ``a = p^l * m`` with ``p`` not dividing ``m``."""
    if a == 0:
        raise ValueError("cannot decompose 0")
    l = 0
    while a % p == 0:
        a //= p
        l += 1
    return l, a


@dataclass(frozen=True)
class Substitution:
    """``y_j = images[j]`` (words in the ``x_i``), checked modulo ``prime``."""

    rank: int
    images: Mapping[int, Word]
    prime: int

    def __post_init__(self):
        missing = [j for j in range(1, self.rank + 1) if j not in self.images]
        if missing:
            raise ValueError(f"substitution has no image for {missing}")

    @classmethod
    def identity(cls, rank: int, prime: int) -> "Substitution":
        return cls(rank, {j: Word(rank, ((j, 1),)) for j in range(1, rank + 1)}, prime)

    def matrix(self) -> list[list[int]]:
        """``M[j][i]`` = exponent sum of ``x_{i+1}`` in ``y_{j+1}``."""
        return [self.images[j].with_rank(self.rank).exponent_sums() for j in range(1, self.rank + 1)]

    def to_json(self) -> dict:
        return {str(j): str(self.images[j]) for j in range(1, self.rank + 1)}


def _rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[v % p for v in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(v - f * w) % p for v, w in zip(m[r], m[rank])]
        rank += 1
    return rank


def burnside_valid(s: Substitution) -> bool:
    """True iff the exponent-sum matrix is invertible over ``GF(p)``, i.e. the
    ``y_j`` map onto a basis of the Frattini quotient."""
    return _rank_mod_p(s.matrix(), s.prime) == s.rank


@dataclass(frozen=True)
class CanonicalWord:
    rank: int
    p: int
    m: int
    power_part: tuple[int, int] | None  # (variable, p^l mod p^m)
    pairs: tuple[tuple[int, int, int], ...]  # (i, j, exponent of [y_i, y_j])
    residual: tuple[int, Word] | None  # (t, h) standing for [y_t, h]
    substitution: Substitution
    # valuation chain of each pair; strictly decreasing except for the last step
    witness: tuple[tuple[int, ...], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "p": self.p,
            "m": self.m,
            "word": str(canonical_word(self)),
            "collected": render(collect(canonical_word(self))),
            "substitution": self.substitution.to_json(),
            "power_part": list(self.power_part) if self.power_part else None,
            "pairs": [list(t) for t in self.pairs],
            "residual": [self.residual[0], str(self.residual[1])] if self.residual else None,
            "witness": [list(c) for c in self.witness],
        }

    def __str__(self) -> str:
        return str(canonical_word(self))


def canonical_word(cw: CanonicalWord) -> Word:
    """The word ``v`` in the new variables."""
    n = cw.rank
    out = Word(n, ())
    if cw.power_part:
        t, e = cw.power_part
        out = Word(n, ((t, e),))
    for i, j, e in cw.pairs:
        out = concat(out, power(commutator_word(Word(n, ((i, 1),)), Word(n, ((j, 1),))), e))
    if cw.residual:
        t, h = cw.residual
        out = concat(out, commutator_word(Word(n, ((t, 1),)), h.with_rank(n)))
    return out


class _Rewriter:
    """Current collected form in the current variables, plus the image of each
    current variable as a collected form in the original ones."""

    def __init__(self, nf: NormalForm, p: int, m: int):
        self.p, self.m, self.q = p, m, p**m
        self.qb = commutator_modulus(self.q)
        self.n = nf.rank
        self.nf = nf.reduce(self.q)
        self.images = [NormalForm.generator(i, self.n, self.q) for i in range(1, self.n + 1)]

    def gen(self, i: int) -> NormalForm:
        return NormalForm.generator(i, self.n, self.q)

    def change(self, t: int, letters: Sequence[tuple[int, int]]):
        """Replace variable ``t`` by ``y_t = prod letters`` (current variables)."""
        where = [k for k, (g, _) in enumerate(letters) if g == t]
        if len(where) != 1:
            raise ValueError(f"variable x{t} must occur in exactly one syllable")
        k = where[0]
        e = letters[k][1]
        if e % self.p == 0:
            raise ValueError(f"exponent {e} of x{t} is divisible by {self.p}")
        r = pow(e, -1, self.q)
        n = self.n
        before = collect(Word(n, tuple(letters[:k])), self.q)
        after = collect(Word(n, tuple(letters[k + 1:])), self.q)
        x_t = (~before * self.gen(t) * ~after) ** r
        sub = [x_t if i == t else self.gen(i) for i in range(1, n + 1)]
        self.nf = nf_substitute(self.nf, sub)
        y_t = collect(Word(n, tuple(letters)), self.q)
        self.images[t - 1] = nf_substitute(y_t, self.images)

    def entry(self, i: int, j: int) -> int:
        return self.nf.b(i, j)

    def substitution(self) -> Substitution:
        return Substitution(self.n, {j: nf_to_word(self.images[j - 1]) for j in range(1, self.n + 1)}, self.p)

    # -- power part ----------------------------------------------------------

    def isolate_power(self, alpha: Sequence[int]) -> tuple[int, int] | None:
        """Gather the power part into ``y_t^(p^l)``; ``alpha`` are the exact
        exponent sums (the current form may already be reduced)."""
        if all(a % self.q == 0 for a in alpha):
            return None
        support = [(i + 1, a) for i, a in enumerate(alpha) if a]
        dec = {i: decompose_exponent(a, self.p) for i, a in support}
        t = min(dec, key=lambda i: (dec[i][0], i))
        lt = dec[t][0]
        letters = [(i, self.p ** (l - lt) * u) for i, (l, u) in sorted(dec.items())]
        self.change(t, letters)
        expect = [0] * self.n
        expect[t - 1] = self.p**lt % self.q
        if list(self.nf.alpha) != expect:
            raise RuntimeError(f"power isolation left alpha={self.nf.alpha}, expected {expect}")
        log.debug("power part isolated at y%d with exponent p^%d", t, lt)
        return t, expect[t - 1]

    # -- commutator pairing --------------------------------------------------

    def _absorb(self, a: int, row: dict[int, int]) -> tuple[int, int]:
        """Turn ``prod_j [x_a, x_j]^row[j]`` into ``[x_a, y_u]^(p^l)``."""
        dec = {j: decompose_exponent(c, self.p) for j, c in row.items()}
        u = min(dec, key=lambda j: (dec[j][0], j))
        lu = dec[u][0]
        self.change(u, [(j, self.p ** (l - lu) * v) for j, (l, v) in sorted(dec.items())])
        if self.entry(a, u) != self.p**lu % self.qb or any(self.entry(a, j) for j in row if j != u):
            raise RuntimeError(f"absorbing row of x{a} failed")
        return u, lu

    def _row(self, a: int, active: set[int], skip: Sequence[int]) -> dict[int, int]:
        return {j: c for j in sorted(active) if j != a and j not in skip and (c := self.entry(a, j))}

    def pair(self, active: set[int]) -> tuple[list[tuple[int, int, int]], list[tuple[int, ...]]]:
        active = set(active)
        pairs, witness = [], []
        while True:
            s1 = next((i for i in sorted(active) if self._row(i, active, [])), None)
            if s1 is None:
                break
            row = {j: c for j, c in self._row(s1, active, []).items() if j > s1}
            u, L = self._absorb(s1, row)
            prev, a = s1, u
            chain = [L]
            while True:
                row = self._row(a, active, [prev])
                if not row:
                    done = (prev, a)
                    break
                u, L2 = self._absorb(a, row)
                chain.append(L2)
                if L <= L2:
                    # [x_prev, y_a]^(p^L) [y_a, y_u]^(p^L2) = [y_a, x_prev^-1 y_u^(p^(L2-L))]^(p^L)
                    self.change(prev, [(prev, -1), (u, self.p ** (L2 - L))])
                    done = (a, prev)
                    break
                # L > L2: fold x_prev into y_u and continue from the new pair
                self.change(u, [(prev, -self.p ** (L - L2)), (u, 1)])
                prev, a, L = a, u, L2
            i, j = sorted(done)
            others = active - {i, j}
            if any(self.entry(i, k) or self.entry(j, k) for k in others):
                raise RuntimeError(f"pair ({i}, {j}) is not isolated")
            pairs.append((i, j, self.entry(i, j)))
            witness.append(tuple(chain))
            log.debug("pair [y%d, y%d]: valuation chain %s", i, j, chain)
            active = others
        return pairs, witness


def lemma_power_reduce(nf: NormalForm, p: int, m: int) -> tuple[Substitution, NormalForm]:
    """Change variables so that the power part is a single ``y_t^(p^l)``.

    ``t`` carries the smallest ``p``-adic valuation among the exponent sums
    (smallest index on ties) and ``y_t = prod_j x_j^(p^(l_j - l_t) m_j)``.
    Returns the substitution and the collected form (mod ``p^m``) in the new
    variables.
    """
    rw = _Rewriter(nf, p, m)
    rw.isolate_power(nf.alpha)
    return rw.substitution(), rw.nf


def lemma_commutator_pairing(nf: NormalForm, p: int, m: int) -> tuple[Substitution, CanonicalWord]:
    """Change variables so a pure commutator word becomes a product of
    commutators in disjoint pairs of variables."""
    q = p**m
    if any(a % q for a in nf.alpha):
        raise ValueError("pairing needs a form with trivial power part")
    rw = _Rewriter(nf, p, m)
    pairs, witness = rw.pair(set(range(1, nf.rank + 1)))
    s = rw.substitution()
    return s, CanonicalWord(nf.rank, p, m, None, tuple(pairs), None, s, tuple(witness))


def canonicalize(w: Word, p: int, m: int) -> CanonicalWord:
    """Canonical word equivalent to ``w`` on every group of class at most 2
    and exponent dividing ``p^m``."""
    nf = collect(w)
    rw = _Rewriter(nf, p, m)
    power_part = rw.isolate_power(nf.alpha)
    active = set(range(1, nf.rank + 1))
    if power_part:
        active.discard(power_part[0])
    pairs, witness = rw.pair(active)
    residual = None
    if power_part:
        t = power_part[0]
        h = tuple((j, c) for j in range(1, nf.rank + 1) if j != t and (c := rw.entry(t, j)))
        if h:
            residual = (t, Word(nf.rank, h))
    cw = CanonicalWord(nf.rank, p, m, power_part, tuple(pairs), residual, rw.substitution(), tuple(witness))
    if collect(canonical_word(cw), rw.q) != rw.nf:
        raise RuntimeError("canonical word does not match the rewritten form")
    return cw


def congruent_after_substitution(w: Word, cw: CanonicalWord) -> bool:
    """``w(x) == v(y(x))`` modulo ``gamma_3 F^(p^m)``, checked in collected form."""
    q = cw.p**cw.m
    images = [collect(cw.substitution.images[j].with_rank(cw.rank), q) for j in range(1, cw.rank + 1)]
    lhs = nf_substitute(collect(canonical_word(cw), q), images)
    return lhs == collect(w, q)


def canonical_indices_disjoint(cw: CanonicalWord) -> bool:
    used = [i for a, b, _ in cw.pairs for i in (a, b)]
    if cw.power_part:
        used.append(cw.power_part[0])
    if cw.residual and (not cw.power_part or cw.residual[0] != cw.power_part[0]):
        used.append(cw.residual[0])
    return len(used) == len(set(used))


def witness_decreasing(cw: CanonicalWord) -> bool:
    """Each chain strictly decreases until its final comparison, where the
    last valuation may not be smaller than the one before."""
    for chain in cw.witness:
        body = chain[:-1] if len(chain) > 1 else chain
        if any(a <= b for a, b in zip(body, body[1:])):
            return False
        if any(v < 0 for v in chain):
            return False
    return True
