"""G-equivalence, canonical-form certification and the census harness."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .counting import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    distribution,
    sylow_distribution,
    theorem_count_bound,
)
from .groups import FiniteGroup, GroupError, is_p_group, nilpotency_class, prime_factors, sylow_decomposition
from .normal_form import collect
from .reduction import (
    burnside_valid,
    canonical_indices_disjoint,
    canonical_word,
    canonicalize,
    congruent_after_substitution,
)
from .words import Word


def pad(w: Word, rank: int) -> Word:
    """Append unused variables; every count is multiplied by ``|G|`` per
    added variable and probabilities are unchanged."""
    if rank < w.rank:
        raise ValueError("cannot shrink rank")
    return w.with_rank(rank)


def g_equivalent(G: FiniteGroup, w1: Word, w2: Word, budget: int = DEFAULT_BUDGET) -> bool:
    """Equal value distributions on ``G`` (after padding to a common rank)."""
    n = max(w1.rank, w2.rank)
    return distribution(G, pad(w1, n), budget) == distribution(G, pad(w2, n), budget)


def class_two_parameters(G: FiniteGroup) -> tuple[int, int]:
    """``(p, m)`` with ``G`` a ``p``-group of exponent ``p^m``."""
    primes = prime_factors(G.order)
    if len(primes) != 1:
        raise GroupError(f"{G.name} is not a p-group")
    p = primes[0]
    e, m = G.exponent, 0
    while e > 1:
        e //= p
        m += 1
    return p, m


def check_class_two(G: FiniteGroup, p: int, m: int):
    cls = nilpotency_class(G)
    if cls is None or cls > 2:
        raise GroupError(f"{G.name} has nilpotency class {cls}; need at most 2")
    if G.order > 1 and prime_factors(G.order) != [p]:
        raise GroupError(f"{G.name} is not a {p}-group")
    if (p**m) % G.exponent:
        raise GroupError(f"exponent {G.exponent} of {G.name} does not divide {p}^{m}")


@dataclass
class CanonicalReport:
    group: str
    word: str
    p: int
    m: int
    canonical: str
    equivalent: bool
    congruent: bool
    burnside_valid: bool
    disjoint: bool
    n_identity: int
    bound: int
    bound_holds: bool
    fibration_linear: bool
    fibre_ok: bool
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all((self.equivalent, self.congruent, self.burnside_valid, self.disjoint,
                    self.bound_holds, self.fibration_linear, self.fibre_ok))

    def to_json(self) -> dict:
        return dict(self.__dict__, passed=self.passed)


def verify_canonicalization(G: FiniteGroup, w: Word, p: int | None = None, m: int | None = None,
                            budget: int = DEFAULT_BUDGET, fibration: bool = True) -> CanonicalReport:
    """Canonicalise ``w`` and check it against the oracle on ``G``.

    ``G`` must have class at most 2 and exponent dividing ``p^m``; ``p`` and
    ``m`` default to the prime of ``G`` and its exponent.
    """
    if p is None or m is None:
        p0, m0 = class_two_parameters(G)
        p = p0 if p is None else p
        m = m0 if m is None else m
    check_class_two(G, p, m)
    cw = canonicalize(w, p, m)
    v = canonical_word(cw)
    d_w = distribution(G, w, budget)
    d_v = distribution(G, v, budget)
    if fibration:
        bound = theorem_count_bound(G, cw, budget)
        lin, fib = bound.fibration_linear, bound.fibre_ok
    else:
        lin = fib = True
    n_id = d_v.count(0)
    b = G.order ** (w.rank - 1)
    return CanonicalReport(
        group=G.name, word=str(w), p=p, m=m, canonical=str(v),
        equivalent=d_w == d_v,
        congruent=congruent_after_substitution(w, cw),
        burnside_valid=burnside_valid(cw.substitution),
        disjoint=canonical_indices_disjoint(cw),
        n_identity=n_id, bound=b, bound_holds=n_id >= b,
        fibration_linear=lin, fibre_ok=fib,
        detail=cw.to_json(),
    )


# -- census ----------------------------------------------------------------


@dataclass
class CensusRow:
    group: str
    word: str
    rank: int
    n_identity: int | None
    total: int | None
    canonical_ok: bool | None  # None when canonicalisation does not apply
    method: str = "oracle"
    error: str | None = None
    runtime: float = 0.0
    order: int = 1

    @property
    def probability(self) -> Fraction | None:
        return None if self.n_identity is None else Fraction(self.n_identity, self.total)

    @property
    def bound(self) -> Fraction:
        return Fraction(1, self.order)

    @property
    def passed(self) -> bool:
        return self.error is None and self.probability >= self.bound

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "group": self.group,
            "word": self.word,
            "rank": self.rank,
            "N": self.n_identity,
            "total": self.total,
            "P": _frac(self.probability),
            "bound": _frac(self.bound),
            "pass": self.passed,
            "canonical_equivalent": self.canonical_ok,
            "method": self.method,
            "error": self.error,
        }
        if timing:
            out["runtime"] = round(self.runtime, 6)
        return out


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


@dataclass
class CensusReport:
    rows: list[CensusRow]

    @property
    def violations(self) -> list[CensusRow]:
        return [r for r in self.rows if r.error is None and not r.passed]

    @property
    def errors(self) -> list[CensusRow]:
        return [r for r in self.rows if r.error is not None]

    @property
    def canonical_failures(self) -> list[CensusRow]:
        return [r for r in self.rows if r.canonical_ok is False]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.errors and not self.canonical_failures

    def to_json(self, timing: bool = False) -> str:
        return json.dumps({"rows": [r.as_dict(timing) for r in self.rows],
                           "violations": len(self.violations),
                           "errors": len(self.errors),
                           "canonical_failures": len(self.canonical_failures)}, indent=2)

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        rows = [r.as_dict(timing) for r in self.rows]
        fields = list(rows[0]) if rows else list(CensusRow("", "", 1, 0, 1, None).as_dict(timing))
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for r in self.rows:
            status = "ERROR " + r.error if r.error else ("ok" if r.passed else "VIOLATION")
            lines.append(f"{r.group}\t{r.word}\tP={_frac(r.probability)}\t>= {_frac(r.bound)}\t"
                         f"canon={r.canonical_ok}\t{status}")
        lines.append(f"{len(self.rows)} rows, {len(self.violations)} violations, "
                     f"{len(self.errors)} errors, {len(self.canonical_failures)} canonical failures")
        return "\n".join(lines)


def dedupe_by_collection(words: Iterable[Word]) -> list[Word]:
    """First word of each collected form; enough for groups of class at most 2."""
    seen = set()
    out = []
    for w in words:
        key = collect(w)
        if key not in seen:
            seen.add(key)
            out.append(w)
    return out


def _group_kind(G: FiniteGroup) -> tuple[int | None, bool]:
    return nilpotency_class(G), is_p_group(G) or G.order == 1


def census_row(G: FiniteGroup, w: Word, info: tuple[int | None, bool], pm: tuple[int, int] | None,
               budget: int, canonical: bool = True) -> CensusRow:
    cls, pgroup = info
    start = time.perf_counter()
    row = CensusRow(G.name, str(w), w.rank, None, None, None, order=G.order)
    try:
        if cls is not None and not pgroup and G.order > 1:
            d = sylow_distribution(G, w, budget)
            row.method = "sylow"
            direct = distribution(G, w, budget)
            if not d == direct:
                raise RuntimeError("Sylow reassembly disagrees with the direct oracle")
        else:
            d = distribution(G, w, budget)
        row.n_identity, row.total = d.count(0), G.order**w.rank
        if canonical and cls is not None and cls <= 2 and G.order > 1:
            if pgroup:
                p, m = pm or class_two_parameters(G)
                rep = verify_canonicalization(G, w, p, m, budget, fibration=False)
                row.canonical_ok = rep.passed
            else:
                oks = []
                for P in sylow_decomposition(G):
                    p, m = class_two_parameters(P)
                    oks.append(verify_canonicalization(P, w, p, m, budget, fibration=False).passed)
                row.canonical_ok = all(oks)
    except (BudgetExceeded, GroupError, RuntimeError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.runtime = time.perf_counter() - start
    return row


def run_census(groups: Sequence[FiniteGroup], words: Iterable[Word],
               pm: dict[str, tuple[int, int]] | None = None, budget: int = DEFAULT_BUDGET,
               jobs: int = 1, canonical: bool = True) -> CensusReport:
    """Bound check for every (group, word); canonical-form check where the
    group has class at most 2.  Rows keep input order."""
    words = list(words)
    pm = pm or {}
    tasks = []
    for G in groups:
        info = _group_kind(G)
        for w in words:
            tasks.append((G, w, info, pm.get(G.name)))

    def run(t):
        return census_row(*t, budget=budget, canonical=canonical)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]
    return CensusReport(rows)
