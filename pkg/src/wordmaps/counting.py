"""Exact solution counts ``N(G, w = c)`` and probabilities ``P(G, w = c)``.

:func:`distribution` is the brute-force oracle: it walks the whole tuple space
``G^n`` in blocks of consecutive tuple indices.  The other counters are the
structural shortcuts (abelian groups, direct products, semidirect products
with abelian kernel, Sylow factorisation) and are always checked against it
in the test-suite.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    derived_subgroup,
    direct_product,
    evaluate_many,
    nilpotency_class,
    sylow_decomposition,
)
from .reduction import CanonicalWord, canonical_word
from .words import Word

DEFAULT_BUDGET = 10**8
BLOCK = 1 << 18


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} evaluations, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass
class Distribution:
    group: FiniteGroup
    rank: int
    counts: np.ndarray  # counts[c] = N(G, w = c)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def count(self, c: int = 0) -> int:
        return int(self.counts[c])

    def probability(self, c: int = 0) -> Fraction:
        return Fraction(int(self.counts[c]), self.group.order**self.rank)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.group.order == other.group.order and np.array_equal(self.counts, other.counts)

    def to_json(self, word: str | Word = "") -> dict:
        return {
            "group": self.group.name,
            "word": str(word),
            "rank": self.rank,
            "counts": {self.group.labels[c]: int(v) for c, v in enumerate(self.counts) if v},
            "probability_identity": _frac(self.probability(0)),
        }


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _tuple_columns(order: int, rank: int, start: int, stop: int) -> list[np.ndarray]:
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for k in range(rank):
        cols.append((idx // order ** (rank - 1 - k)) % order)
    return cols


def distribution(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> Distribution:
    """``N(G, w = c)`` for every ``c`` by exhaustive enumeration of ``G^rank``."""
    total = G.order**w.rank
    if total > budget:
        raise BudgetExceeded(total, budget)
    blocks = [(s, min(s + BLOCK, total)) for s in range(0, total, BLOCK)]

    def run(block):
        cols = _tuple_columns(G.order, w.rank, *block)
        return np.bincount(evaluate_many(w, G, cols), minlength=G.order)

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    counts = np.sum(parts, axis=0, dtype=np.int64)
    return Distribution(G, w.rank, counts)


def count_solutions(G: FiniteGroup, w: Word, c: int = 0, budget: int = DEFAULT_BUDGET) -> int:
    return distribution(G, w, budget).count(c)


def probability(G: FiniteGroup, w: Word, c: int = 0, budget: int = DEFAULT_BUDGET) -> Fraction:
    return distribution(G, w, budget).probability(c)


# -- abelian closed form ---------------------------------------------------


def abelian_image(G: FiniteGroup, w: Word) -> list[int]:
    """Image of the word map of ``w`` on an abelian group: the subgroup
    generated by the values on tuples with a single non-trivial entry."""
    if not G.is_abelian():
        raise GroupError(f"{G.name} is not abelian")
    gens = set()
    for e in w.exponent_sums():
        gens.update(G.power_table[e % G.exponent].tolist())
    return G.subgroup_generated(gens)


def abelian_count(G: FiniteGroup, w: Word) -> Distribution:
    """``N(G, w = c) = |G|^n / |Im w|`` on the image and 0 elsewhere."""
    image = abelian_image(G, w)
    total = G.order**w.rank
    counts = np.zeros(G.order, dtype=np.int64)
    counts[image] = total // len(image)
    return Distribution(G, w.rank, counts)


# -- direct products -------------------------------------------------------


def direct_product_distribution(d1: Distribution, d2: Distribution,
                                product: FiniteGroup | None = None) -> Distribution:
    """Distribution on ``G1 x G2`` (index ``a * |G2| + b``) from the factors."""
    if d1.rank != d2.rank:
        raise ValueError(f"rank mismatch: {d1.rank} vs {d2.rank}")
    G = product or direct_product(d1.group, d2.group)
    counts = np.outer(d1.counts, d2.counts).ravel()
    return Distribution(G, d1.rank, counts)


def sylow_distribution(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET) -> Distribution:
    """Distribution of a nilpotent group assembled from its Sylow subgroups.

    ``g = g_1 g_2 ... g_r`` with ``g_i`` in the ``i``-th Sylow subgroup, and
    word values factor the same way because the subgroups commute.
    """
    parts = sylow_decomposition(G)
    counts = np.ones(1, dtype=np.int64)
    elems = np.zeros(1, dtype=np.int64)
    for P in parts:
        d = distribution(P, w, budget)
        counts = np.outer(counts, d.counts).ravel()
        elems = G.table[elems[:, None], P.embedding[None, :]].ravel()
    out = np.zeros(G.order, dtype=np.int64)
    np.add.at(out, elems, counts)
    return Distribution(G, w.rank, out)


# -- semidirect products ---------------------------------------------------


@dataclass
class SemidirectCount:
    exact: int
    satisfying_h: int  # tuples in H^n with w(h) = 1
    lower_bound: int  # satisfying_h * |A|^(n-1)
    kernel_sizes: dict  # h-tuple -> |Ker T_h| for satisfying h


def _coefficient_maps(w: Word, A: FiniteGroup, H: FiniteGroup, phi: np.ndarray,
                      hs: Sequence[int]) -> tuple[list[np.ndarray], int]:
    """Push every ``a_i`` to the left of ``w(a_1 h_1, ...)``.

    Returns the endomorphisms ``psi_i`` of ``A`` (as index arrays) with
    ``w(a h) = (sum_i psi_i(a_i)) * w(h)`` and the value ``w(h)``.
    """
    zero = np.zeros(A.order, dtype=np.int64)
    ident = np.arange(A.order)
    psi = [zero.copy() for _ in range(w.rank)]
    prefix = 0  # product of the h-letters read so far
    for g, e in w.letters:
        h = hs[g - 1]
        hinv = H.inv(h)
        for _ in range(abs(e)):
            if e > 0:
                # (a h): contributes phi_prefix(a)
                psi[g - 1] = A.table[psi[g - 1], phi[prefix][ident]]
                prefix = H.mul(prefix, h)
            else:
                # (a h)^-1 = h^-1 a^-1: contributes -phi_{prefix h^-1}(a)
                prefix = H.mul(prefix, hinv)
                psi[g - 1] = A.table[psi[g - 1], A.inverse[phi[prefix][ident]]]
    return psi, prefix


def semidirect_count(A: FiniteGroup, H: FiniteGroup, action, w: Word,
                     budget: int = DEFAULT_BUDGET) -> SemidirectCount:
    """``N(A x| H, w = 1)`` via the linear maps ``T_h`` on ``A^n``.

    For each ``h`` with ``w(h) = 1`` the solutions ``a`` form ``Ker T_h``, whose
    order is ``|A|^n / |Im T_h|``; the image is generated by the images of
    the ``psi_i``.
    """
    if not A.is_abelian():
        raise GroupError("normal factor must be abelian")
    phi = np.asarray([np.asarray(action[h], dtype=np.int64) for h in range(H.order)])
    n = w.rank
    cost = H.order**n * max(1, len(w.letters)) * A.order
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    exact = 0
    satisfying = 0
    kernels = {}
    for hs in np.ndindex(*(H.order,) * n):
        psi, value = _coefficient_maps(w, A, H, phi, hs)
        if value != 0:
            continue
        satisfying += 1
        image = A.subgroup_generated(np.unique(np.concatenate(psi)).tolist())
        k = A.order**n // len(image)
        kernels[hs] = k
        exact += k
    return SemidirectCount(exact, satisfying, satisfying * A.order ** (n - 1), kernels)


# -- the class-2 bound on canonical words -----------------------------------


@dataclass
class BoundReport:
    group: str
    word: str
    rank: int
    n_identity: int
    bound: int  # |G|^(rank-1)
    holds: bool
    fibration_checked: int  # number of fixings of the paired variables checked
    fibration_linear: bool
    fibre_kernel_min: int | None  # smallest kernel over the fixings
    fibre_kernel_bound: int  # |G|^(n-1-k)

    @property
    def fibre_ok(self) -> bool:
        return self.fibre_kernel_min is None or self.fibre_kernel_min >= self.fibre_kernel_bound

    def to_json(self) -> dict:
        return dict(self.__dict__, fibre_ok=self.fibre_ok)


def theorem_count_bound(G: FiniteGroup, v: CanonicalWord, budget: int = DEFAULT_BUDGET, max_fixings: int = 64,
                        max_pairs: int = 4096, seed: int = 0) -> BoundReport:
    """Check ``N(G, v) >= |G|^(n-1)`` for a canonical word ``v`` and probe the
    counting argument behind it.

    With the second variable of every commutator pair fixed and the power
    variable restricted to ``G'``, ``v`` is a homomorphism from
    ``G' x G^(n-1-k)`` to ``G'``; its kernel has at least ``|G|^(n-1-k)``
    elements.  Both facts are checked on up to ``max_fixings`` fixings.
    """
    cls = nilpotency_class(G)
    if cls is None or cls > 2:
        raise GroupError(f"{G.name} has nilpotency class {cls}, need at most 2")
    word = canonical_word(v)
    n = word.rank
    N = distribution(G, word, budget).count(0)
    bound = G.order ** (n - 1)

    k = len(v.pairs)
    fixed = [b for _, b, _ in v.pairs]
    power_var = v.power_part[0] if v.power_part else None
    free = [i for i in range(1, n + 1) if i not in fixed and i != power_var]
    Gp = np.asarray(derived_subgroup(G))
    rng = np.random.default_rng(seed)

    if power_var is not None:
        domain_vars = [power_var] + free
        domain_sizes = [len(Gp)] + [G.order] * len(free)
    else:
        domain_vars = free
        domain_sizes = [G.order] * len(free)
    domain_total = int(np.prod(domain_sizes, dtype=np.int64)) if domain_vars else 1

    all_fixings = G.order**k
    fix_ids = np.arange(all_fixings) if all_fixings <= max_fixings else rng.choice(all_fixings, max_fixings, replace=False)
    linear = True
    kernel_min = None
    if domain_total * len(fix_ids) <= budget:
        for fid in fix_ids:
            zs = _tuple_columns(G.order, k, int(fid), int(fid) + 1) if k else []
            dom_cols = _tuple_columns(domain_total, 1, 0, domain_total)[0]
            digits = _mixed_digits(dom_cols, domain_sizes)
            values = {}
            for var, d in zip(domain_vars, digits):
                values[var] = Gp[d] if var == power_var else d
            cols = _assemble(n, values, dict(zip(fixed, (z[0] for z in zs))), domain_total)
            out = evaluate_many(word, G, cols)
            if not np.isin(out, Gp).all():
                linear = False
            kern = int((out == 0).sum())
            kernel_min = kern if kernel_min is None else min(kernel_min, kern)
            # homomorphism: v'(xy) = v'(x) v'(y) on sampled pairs of domain points
            m = min(max_pairs, domain_total**2)
            x = rng.integers(0, domain_total, m)
            y = rng.integers(0, domain_total, m)
            dx = _mixed_digits(x, domain_sizes)
            dy = _mixed_digits(y, domain_sizes)
            prod_vals = {}
            for var, a, b in zip(domain_vars, dx, dy):
                if var == power_var:
                    prod_vals[var] = G.table[Gp[a], Gp[b]]
                else:
                    prod_vals[var] = G.table[a, b]
            zfix = dict(zip(fixed, (z[0] for z in zs)))
            lhs = evaluate_many(word, G, _assemble(n, prod_vals, zfix, m))
            vx = out[x]
            vy = out[y]
            if not (lhs == G.table[vx, vy]).all():
                linear = False
    else:
        fix_ids = []
    fibre_bound = G.order ** (n - 1 - k)
    return BoundReport(G.name, str(word), n, N, bound, N >= bound, len(fix_ids), linear,
                       kernel_min, fibre_bound)


def _mixed_digits(idx: np.ndarray, sizes: Sequence[int]) -> list[np.ndarray]:
    digits = []
    rest = np.asarray(idx, dtype=np.int64)
    for s in reversed(sizes):
        digits.append(rest % s)
        rest = rest // s
    return digits[::-1]


def _assemble(n: int, values: dict, fixed: dict, size: int) -> list[np.ndarray]:
    cols = []
    for i in range(1, n + 1):
        if i in values:
            cols.append(np.asarray(values[i], dtype=np.int64))
        elif i in fixed:
            cols.append(np.full(size, int(fixed[i]), dtype=np.int64))
        else:
            cols.append(np.zeros(size, dtype=np.int64))
    return cols


def distribution_json(d: Distribution, word) -> str:
    return json.dumps(d.to_json(word), indent=2)
