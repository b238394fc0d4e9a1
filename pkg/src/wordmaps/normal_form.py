"""Collected form of words modulo the third term of the lower central series.

Every word ``w`` in ``x1..xn`` is congruent modulo ``gamma_3(F_n)`` to

    x1^a1 * ... * xn^an * prod_{i<j} [xi, xj]^b_ij

with ``[x, y] = x^-1 y^-1 x y``.  :func:`collect` computes ``(a, b)``;
:class:`NormalForm` also carries the multiplication of the free nilpotent
group of class 2 so that substitutions can be applied without expanding
words.  An optional ``modulus`` ``q`` works in ``F_n / R`` with
``R = gamma_3(F_n) F_n^q``: exponent sums are taken modulo ``q`` and
commutator exponents modulo :func:`commutator_modulus` ``(q)``, which is
``q/2`` for even ``q`` because ``(xy)^q = x^q y^q [y, x]^(q(q-1)/2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .words import Word, commutator_word, concat


def commutator_modulus(q: int) -> int:
    """Order of ``[x, y]`` in ``F_2 / gamma_3(F_2) F_2^q``."""
    return q if q % 2 else q // 2


def _zeros(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple((0,) * n for _ in range(n))


@dataclass(frozen=True)
class NormalForm:
    rank: int
    alpha: tuple[int, ...]
    beta: tuple[tuple[int, ...], ...]  # n x n, only entries i < j used
    modulus: int | None = None

    def __post_init__(self):
        n = self.rank
        if len(self.alpha) != n or len(self.beta) != n or any(len(r) != n for r in self.beta):
            raise ValueError("alpha/beta shape does not match rank")
        for i in range(n):
            for j in range(i + 1):
                if self.beta[i][j]:
                    raise ValueError("beta must be strictly upper triangular")
        q = self.modulus
        if q is not None:
            qb = commutator_modulus(q)
            if any(not 0 <= a < q for a in self.alpha) or any(
                not 0 <= b < qb for row in self.beta for b in row
            ):
                raise ValueError(f"entries not reduced modulo {q}")

    @classmethod
    def identity(cls, rank: int, modulus: int | None = None) -> "NormalForm":
        return cls(rank, (0,) * rank, _zeros(rank), modulus)

    @classmethod
    def generator(cls, index: int, rank: int, modulus: int | None = None) -> "NormalForm":
        alpha = [0] * rank
        alpha[index - 1] = 1
        return _make(rank, alpha, [list(r) for r in _zeros(rank)], modulus)

    @classmethod
    def from_data(cls, alpha: Sequence[int], beta=None, modulus: int | None = None) -> "NormalForm":
        """Build from an exponent vector and ``beta`` given either as a full
        matrix or a mapping ``{(i, j): value}`` with 1-based ``i < j``."""
        n = len(alpha)
        b = [[0] * n for _ in range(n)]
        if isinstance(beta, dict):
            for (i, j), v in beta.items():
                if not 1 <= i < j <= n:
                    raise ValueError(f"beta index ({i}, {j}) must satisfy 1 <= i < j <= {n}")
                b[i - 1][j - 1] = v
        elif beta is not None:
            for i in range(n):
                for j in range(i + 1, n):
                    b[i][j] = beta[i][j]
        return _make(n, list(alpha), b, modulus)

    def b(self, i: int, j: int) -> int:
        """Exponent of ``[xi, xj]`` for any ``i != j`` (1-based), using
        ``[xj, xi] = [xi, xj]^-1``."""
        if i < j:
            return self.beta[i - 1][j - 1]
        v = -self.beta[j - 1][i - 1]
        return v % commutator_modulus(self.modulus) if self.modulus else v

    def beta_dict(self) -> dict[tuple[int, int], int]:
        n = self.rank
        return {(i + 1, j + 1): self.beta[i][j] for i in range(n) for j in range(i + 1, n) if self.beta[i][j]}

    def is_identity(self) -> bool:
        return not any(self.alpha) and not self.beta_dict()

    def reduce(self, modulus: int) -> "NormalForm":
        if self.modulus is not None and self.modulus % modulus:
            raise ValueError(f"cannot reduce modulo {modulus} from modulo {self.modulus}")
        return _make(self.rank, list(self.alpha), [list(r) for r in self.beta], modulus)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        return nf_mul(self, other)

    def __invert__(self) -> "NormalForm":
        return nf_inverse(self)

    def __pow__(self, k: int) -> "NormalForm":
        return nf_power(self, k)

    def __str__(self) -> str:
        return render(self)


def _make(n, alpha, beta, modulus) -> NormalForm:
    if modulus is not None:
        qb = commutator_modulus(modulus)
        alpha = [a % modulus for a in alpha]
        beta = [[v % qb for v in row] for row in beta]
    for i in range(n):
        for j in range(i + 1):
            beta[i][j] = 0
    return NormalForm(n, tuple(alpha), tuple(tuple(r) for r in beta), modulus)


def _common(a: NormalForm, b: NormalForm) -> tuple[int, int | None]:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    return a.rank, a.modulus


# -- group law of F_n / gamma_3 --------------------------------------------


def nf_mul(a: NormalForm, b: NormalForm) -> NormalForm:
    # moving x_i^{b_i} left past x_j^{a_j} (j > i) costs [x_i, x_j]^{-a_j b_i}
    n, q = _common(a, b)
    alpha = [x + y for x, y in zip(a.alpha, b.alpha)]
    beta = [[a.beta[i][j] + b.beta[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        if b.alpha[i]:
            for j in range(i + 1, n):
                beta[i][j] -= a.alpha[j] * b.alpha[i]
    return _make(n, alpha, beta, q)


def nf_inverse(a: NormalForm) -> NormalForm:
    n = a.rank
    beta = [[-a.beta[i][j] - a.alpha[j] * a.alpha[i] if j > i else 0 for j in range(n)] for i in range(n)]
    return _make(n, [-x for x in a.alpha], beta, a.modulus)


def nf_power(a: NormalForm, k: int) -> NormalForm:
    if k < 0:
        return nf_power(nf_inverse(a), -k)
    # (x^a C)^k = x^{ka} C^k [x_i, x_j]^{-binom(k,2) a_i a_j}
    n = a.rank
    t = k * (k - 1) // 2
    beta = [[k * a.beta[i][j] - t * a.alpha[i] * a.alpha[j] if j > i else 0 for j in range(n)] for i in range(n)]
    return _make(n, [k * x for x in a.alpha], beta, a.modulus)


def nf_commutator(a: NormalForm, b: NormalForm) -> NormalForm:
    """``[a, b]``; central and bilinear in the exponent vectors."""
    n, q = _common(a, b)
    beta = [
        [a.alpha[i] * b.alpha[j] - a.alpha[j] * b.alpha[i] if j > i else 0 for j in range(n)]
        for i in range(n)
    ]
    return _make(n, [0] * n, beta, q)


def nf_substitute(nf: NormalForm, images: Sequence[NormalForm]) -> NormalForm:
    """Image of ``nf`` under the homomorphism sending ``x_i`` to ``images[i-1]``."""
    if len(images) != nf.rank:
        raise ValueError(f"need {nf.rank} images, got {len(images)}")
    out = images[0] ** 0
    for i, a in enumerate(nf.alpha):
        if a:
            out = out * images[i] ** a
    for (i, j), v in nf.beta_dict().items():
        out = out * nf_commutator(images[i - 1], images[j - 1]) ** v
    return out


# -- collection ------------------------------------------------------------


def collect(w: Word, modulus: int | None = None) -> NormalForm:
    """Collected form of ``w`` modulo ``gamma_3``.

    ``alpha`` is the exponent sum of each generator.  Each pair of syllables
    ``x_j^e ... x_i^f`` standing out of order (``j > i``) contributes
    ``-e*f`` to ``beta_ij``.
    """
    n = w.rank
    alpha = [0] * n
    beta = [[0] * n for _ in range(n)]
    # running[j]: total exponent of x_j seen so far
    running = [0] * n
    for g, e in w.letters:
        i = g - 1
        for j in range(i + 1, n):
            if running[j]:
                beta[i][j] -= running[j] * e
        running[i] += e
        alpha[i] += e
    return _make(n, alpha, beta, modulus)


def nf_to_word(nf: NormalForm) -> Word:
    """The word ``x1^a1 ... xn^an prod_{i<j} [xi, xj^b_ij]``.

    ``[xi, xj^b]`` is congruent to ``[xi, xj]^b`` modulo ``gamma_3`` and
    keeps the word length independent of ``b``.
    """
    n = nf.rank
    out = Word(n, tuple((i + 1, a) for i, a in enumerate(nf.alpha) if a))
    for (i, j), v in nf.beta_dict().items():
        out = concat(out, commutator_word(Word(n, ((i, 1),)), Word(n, ((j, v),))))
    return out


def render(nf: NormalForm) -> str:
    """Canonical text that parses back to a word with the same collected form."""
    parts = [f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(nf.alpha) if a]
    for (i, j), v in nf.beta_dict().items():
        parts.append(f"[x{i},x{j}]" if v == 1 else f"[x{i},x{j}]^{v}")
    return "*".join(parts) if parts else "1"


def reduce_mod_R(nf: NormalForm, p: int, m: int) -> NormalForm:
    """Canonical representative modulo ``R = gamma_3 F^(p^m)``.

    Exponent sums land in ``[0, p^m)``, commutator exponents in ``[0, p^m)``
    for odd ``p`` and in ``[0, 2^(m-1))`` for ``p = 2``.  Valid in every group
    of class at most 2 and exponent dividing ``p^m``.
    """
    return nf.reduce(p**m)


def nf_equal_mod_R(a: NormalForm, b: NormalForm, p: int, m: int) -> bool:
    """Congruence modulo ``gamma_3 F^(p^m)``: entrywise equality after
    :func:`reduce_mod_R`."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    return reduce_mod_R(a, p, m) == reduce_mod_R(b, p, m)

