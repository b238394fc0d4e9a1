"""Finite groups as dense Cayley tables.

Elements are the integers ``0..order-1`` with ``0`` the identity.  Structured
constructors build the table once; every query afterwards is a table lookup.

Semidirect products use pairs ``(a, h)`` standing for the product ``a*h`` and
the rule

    (a, h) * (a', h') = (a + phi_h(a'), h h')

where ``phi_h(a') = h a' h^-1`` is the action of ``h`` on the abelian normal
factor.  Element ``(a, h)`` has index ``a * |H| + h``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .words import Word


class GroupError(ValueError):
    pass


class NotNilpotentError(GroupError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table, labels: Sequence[str] | None = None, name: str = "group",
                 generators: Sequence[int] | None = None, embedding=None, check: bool = True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = table.shape[0]
        if check:
            _check_table(table)
        self.table = table
        self.table.flags.writeable = False
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise GroupError("label count does not match order")
        self.generators = list(generators) if generators is not None else None
        # indices of these elements inside a parent group, for subgroups
        self.embedding = None if embedding is None else np.asarray(embedding, dtype=np.int64)
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self.inverse = inv

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def __getitem__(self, i: int) -> "GroupElement":
        if not 0 <= i < self.order:
            raise IndexError(i)
        return GroupElement(self, int(i))

    def elements(self) -> list["GroupElement"]:
        return [GroupElement(self, i) for i in range(self.order)]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def comm(self, a: int, b: int) -> int:
        t, inv = self.table, self.inverse
        return int(t[t[inv[a], inv[b]], t[a, b]])

    def power(self, a: int, k: int) -> int:
        return int(self.power_table[k % self.exponent, a])

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        k = 1
        pending = cur != 0
        while pending.any():
            k += 1
            cur = self.table[cur, np.arange(self.order)]
            done = pending & (cur == 0)
            orders[done] = k
            pending &= ~done
        return orders

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(int(o) for o in self.element_orders))

    @cached_property
    def power_table(self) -> np.ndarray:
        """``power_table[k, g] = g^k`` for ``0 <= k < exponent``."""
        e = self.exponent
        out = np.empty((e, self.order), dtype=np.int64)
        out[0] = 0
        idx = np.arange(self.order)
        for k in range(1, e):
            out[k] = self.table[out[k - 1], idx]
        return out

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def subgroup_generated(self, gens: Iterable[int]) -> list[int]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = sorted({int(g) for g in gens} - {0})
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def subgroup(self, elements: Iterable[int], name: str | None = None) -> "FiniteGroup":
        """The subgroup on ``elements`` (which must be closed) as its own table."""
        elems = sorted({int(e) for e in elements})
        if not elems or elems[0] != 0:
            raise GroupError("subgroup must contain the identity")
        pos = {e: i for i, e in enumerate(elems)}
        sub = self.table[np.ix_(elems, elems)]
        try:
            local = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
        except KeyError:
            raise GroupError("element set is not closed under multiplication") from None
        return FiniteGroup(local, [self.labels[e] for e in elems], name or f"sub({self.name})",
                           embedding=elems, check=False)

    def spec(self) -> str:
        return self.name


@dataclass(frozen=True)
class GroupElement:
    group: FiniteGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise IndexError(self.index)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def __invert__(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.index))

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, self.group.power(self.index, k))

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"<{self.group.labels[self.index]} in {self.group.name}>"

    def __eq__(self, other) -> bool:
        if isinstance(other, GroupElement):
            return self.group is other.group and self.index == other.index
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.group), self.index))


def _check_table(table: np.ndarray, samples: int = 100_000, seed: int = 0):
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise GroupError("table entries out of range")
    rng = np.arange(n)
    if not ((table[0] == rng).all() and (table[:, 0] == rng).all()):
        raise GroupError("element 0 must be the identity")
    for row in table:
        if len(np.unique(row)) != n:
            raise GroupError("table rows are not permutations (no inverses)")
    if n <= 64:
        a, b, c = np.meshgrid(rng, rng, rng, indexing="ij")
        ok = table[table[a, b], c] == table[a, table[b, c]]
    else:
        r = np.random.default_rng(seed)
        a, b, c = r.integers(0, n, size=(3, samples))
        ok = table[table[a, b], c] == table[a, table[b, c]]
    if not ok.all():
        raise GroupError("multiplication is not associative")


def from_elements(elements: Sequence[Hashable], mul: Callable, labels=None, name="group",
                  generators=None) -> FiniteGroup:
    """Tabulate ``mul`` over ``elements``; ``elements[0]`` must be the identity."""
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = pos[mul(a, b)]
    if labels is None:
        labels = [str(e) for e in elements]
    return FiniteGroup(table, labels, name, generators=generators, check=n <= 64)


def generate(gens: Sequence[Hashable], mul: Callable, identity: Hashable, name="group",
             label: Callable | None = None) -> FiniteGroup:
    """Closure of ``gens`` under ``mul`` (breadth first, identity first)."""
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    labels = [label(e) for e in elements] if label else None
    gen_idx = [elements.index(g) for g in gens]
    return from_elements(elements, mul, labels, name, generators=gen_idx)


# -- constructors ----------------------------------------------------------


def cyclic(k: int) -> FiniteGroup:
    if k < 1:
        raise GroupError("cyclic group order must be positive")
    r = np.arange(k)
    table = (r[:, None] + r[None, :]) % k
    return FiniteGroup(table, [str(i) for i in range(k)], f"cyclic:{k}",
                       generators=[1 % k], check=False)


def abelian(factors: Sequence[int]) -> FiniteGroup:
    """``Z/k1 x ... x Z/kr`` with lexicographic element indices."""
    factors = [int(k) for k in factors]
    if not factors or any(k < 1 for k in factors):
        raise GroupError("abelian factors must be positive")
    elems = list(itertools.product(*(range(k) for k in factors)))
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), len(factors))
    mods = np.array(factors)
    sums = (arr[:, None, :] + arr[None, :, :]) % mods
    weights = np.array([math.prod(factors[i + 1:]) for i in range(len(factors))])
    table = (sums * weights).sum(axis=-1)
    labels = [str(e[0]) if len(e) == 1 else "(" + ",".join(map(str, e)) + ")" for e in elems]
    return FiniteGroup(table, labels, "abelian:" + ",".join(map(str, factors)), check=False)


def heisenberg(p: int, k: int = 1) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over ``Z/p^k``.

    ``(a, b, c)`` is the matrix with ``a, b`` above the diagonal and ``c`` in
    the corner, so ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')``.
    """
    q = p**k
    elems = list(itertools.product(range(q), repeat=3))

    def mul(x, y):
        return ((x[0] + y[0]) % q, (x[1] + y[1]) % q, (x[2] + y[2] + x[0] * y[1]) % q)

    g = from_elements(elems, mul, [f"[{a},{b},{c}]" for a, b, c in elems],
                      f"heisenberg:p={p},k={k}", generators=[elems.index((1, 0, 0)), elems.index((0, 1, 0))])
    return g


def dihedral(order: int) -> FiniteGroup:
    """Symmetries of the regular ``order/2``-gon; ``r^i s^j`` has index ``i + n*j``."""
    if order < 2 or order % 2:
        raise GroupError("dihedral group order must be even and positive")
    n = order // 2
    elems = [(i, j) for j in range(2) for i in range(n)]

    def mul(x, y):
        return ((x[0] + (-1) ** x[1] * y[0]) % n, (x[1] + y[1]) % 2)

    labels = [("r^%d" % i if i else "1") if j == 0 else ("r^%d s" % i if i else "s") for i, j in elems]
    return from_elements(elems, mul, labels, f"dihedral:{order}", generators=[1 % order, n])


def _qmul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion8() -> FiniteGroup:
    names = {(1, 0, 0, 0): "1", (0, 1, 0, 0): "i", (0, 0, 1, 0): "j", (0, 0, 0, 1): "k"}

    def label(q):
        for key, s in names.items():
            if q == key:
                return s
            if tuple(-v for v in q) == key:
                return "-" + s
        raise AssertionError(q)

    return generate([(0, 1, 0, 0), (0, 0, 1, 0)], _qmul, (1, 0, 0, 0), "quaternion:8", label)


def modular16() -> FiniteGroup:
    """``<a, b | a^8 = b^2 = 1, b a b = a^5>``; element ``a^i b^j``."""
    elems = [(i, j) for j in range(2) for i in range(8)]

    def mul(x, y):
        # b a^i = a^{5i} b
        return ((x[0] + (5 ** x[1]) * y[0]) % 8, (x[1] + y[1]) % 2)

    labels = [f"a^{i}" + (" b" if j else "") for i, j in elems]
    return from_elements(elems, mul, labels, "modular:16", generators=[1, 8])


def symmetric3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    return from_elements(perms, lambda a, b: tuple(a[b[i]] for i in range(3)), name="symmetric:3")


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Pairs ``(a, b)`` with index ``a * |G2| + b``."""
    n1, n2 = g1.order, g2.order
    t1 = g1.table[:, None, :, None]
    t2 = g2.table[None, :, None, :]
    table = (t1 * n2 + t2).reshape(n1 * n2, n1 * n2)
    labels = [f"({a},{b})" for a in g1.labels for b in g2.labels]
    return FiniteGroup(table, labels, f"product:({g1.name})x({g2.name})", check=False)


def semidirect_product(A: FiniteGroup, H: FiniteGroup, action) -> FiniteGroup:
    """``A x| H`` for abelian ``A``.

    ``action[h]`` is the permutation of ``A``'s element indices by which ``h``
    acts; it must be an automorphism and ``action[h h'] = action[h] o
    action[h']``.
    """
    phi = np.asarray([np.asarray(action[h], dtype=np.int64) for h in range(H.order)])
    validate_action(A, H, phi)
    na, nh = A.order, H.order
    a = np.arange(na)[:, None, None, None]
    h = np.arange(nh)[None, :, None, None]
    a2 = np.arange(na)[None, None, :, None]
    h2 = np.arange(nh)[None, None, None, :]
    anew = A.table[a, phi[h, a2]]
    hnew = H.table[h, h2]
    table = (anew * nh + hnew).reshape(na * nh, na * nh)
    labels = [f"({x},{y})" for x in A.labels for y in H.labels]
    g = FiniteGroup(table, labels, f"semidirect:({A.name})x|({H.name})", check=False)
    g.action = phi
    g.factors = (A, H)
    return g


def validate_action(A: FiniteGroup, H: FiniteGroup, phi: np.ndarray):
    if not A.is_abelian():
        raise GroupError("normal factor of the semidirect product must be abelian")
    if phi.shape != (H.order, A.order):
        raise GroupError("action must give one permutation of A per element of H")
    idx = np.arange(A.order)
    for h in range(H.order):
        f = phi[h]
        if sorted(f.tolist()) != list(range(A.order)):
            raise GroupError(f"action of element {h} is not a permutation")
        if not (f[A.table] == A.table[f[:, None], f[None, :]]).all():
            raise GroupError(f"action of element {h} is not an automorphism")
    if not (phi[0] == idx).all():
        raise GroupError("identity must act trivially")
    for h1 in range(H.order):
        for h2 in range(H.order):
            if not (phi[H.table[h1, h2]] == phi[h1][phi[h2]]).all():
                raise GroupError("action is not a homomorphism")


def inversion_action(A: FiniteGroup, H: FiniteGroup, flip: Callable[[int], bool]) -> list[list[int]]:
    """``h`` acts by inversion when ``flip(h)``, trivially otherwise."""
    return [A.inverse.tolist() if flip(h) else list(range(A.order)) for h in range(H.order)]


# -- structure -------------------------------------------------------------


def commutator_subgroup(G: FiniteGroup, X: Sequence[int], Y: Sequence[int]) -> list[int]:
    """``[X, Y]``: subgroup generated by commutators of ``X`` with ``Y``."""
    t, inv = G.table, G.inverse
    x = np.asarray(X)[:, None]
    y = np.asarray(Y)[None, :]
    comms = t[t[inv[x], inv[y]], t[x, y]]
    return G.subgroup_generated(np.unique(comms).tolist())


def lower_central_series(G: FiniteGroup) -> list[list[int]]:
    """``[G, gamma_2, ...]`` until it stabilises."""
    everything = list(range(G.order))
    series = [everything]
    while True:
        nxt = commutator_subgroup(G, series[-1], everything)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def nilpotency_class(G: FiniteGroup) -> int | None:
    """Nilpotency class (0 for the trivial group), or ``None`` if not nilpotent."""
    series = lower_central_series(G)
    if len(series[-1]) != 1:
        return None
    return len(series) - 1


def exponent(G: FiniteGroup) -> int:
    return G.exponent


def derived_subgroup(G: FiniteGroup) -> list[int]:
    everything = list(range(G.order))
    return commutator_subgroup(G, everything, everything)


def center(G: FiniteGroup) -> list[int]:
    return np.nonzero((G.table == G.table.T).all(axis=1))[0].tolist()


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    t, inv = G.table, G.inverse
    g = np.arange(G.order)
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in range(G.order):
        if seen[x]:
            continue
        cls = np.unique(t[t[inv[g], x], g])
        seen[cls] = True
        classes.append(cls.tolist())
    return classes


def conjugacy_class_count(G: FiniteGroup) -> int:
    return len(conjugacy_classes(G))


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_p_group(G: FiniteGroup) -> bool:
    return len(prime_factors(G.order)) == 1


def sylow_decomposition(G: FiniteGroup) -> list[FiniteGroup]:
    """Sylow subgroups of a nilpotent group, one per prime dividing ``|G|``.

    Each part carries ``embedding`` (its elements' indices in ``G``).  Raises
    :class:`NotNilpotentError` when the elements of ``p``-power order fail to
    form a subgroup of full ``p``-part order.
    """
    parts = []
    orders = G.element_orders
    for p in prime_factors(G.order):
        pk = p ** _valuation(G.order, p)
        elems = [i for i in range(G.order) if pk % int(orders[i]) == 0]
        if len(elems) != pk:
            raise NotNilpotentError(f"{G.name}: {len(elems)} elements of {p}-power order, expected {pk}")
        try:
            parts.append(G.subgroup(elems, f"sylow{p}({G.name})"))
        except GroupError:
            raise NotNilpotentError(f"{G.name}: {p}-elements are not closed") from None
    return parts


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def all_abelian_groups(max_order: int) -> list[FiniteGroup]:
    """One group per isomorphism type of abelian group with order ``<= max_order``,
    as products of cyclic groups of prime-power order."""
    out = [cyclic(1)]
    for n in range(2, max_order + 1):
        choices = []
        for p in prime_factors(n):
            choices.append([[p**k for k in part] for part in _partitions(_valuation(n, p))])
        for combo in itertools.product(*choices):
            factors = [k for part in combo for k in part]
            out.append(cyclic(factors[0]) if len(factors) == 1 else abelian(factors))
    return out


def _partitions(n: int, largest: int | None = None) -> list[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        return [[]]
    return [[k] + rest for k in range(min(n, largest), 0, -1) for rest in _partitions(n - k, k)]


# -- evaluation ------------------------------------------------------------


def evaluate_many(w: Word, G: FiniteGroup, columns: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``w`` on many tuples at once; ``columns[i]`` holds the values of
    ``x_{i+1}``."""
    if len(columns) != w.rank:
        raise ValueError(f"word has rank {w.rank} but {len(columns)} columns were given")
    shape = np.broadcast(*columns).shape if columns else ()
    out = np.zeros(shape, dtype=np.int64)
    pt, e = G.power_table, G.exponent
    for g, k in w.letters:
        out = G.table[out, pt[k % e][columns[g - 1]]]
    return out


def evaluate(w: Word, G: FiniteGroup, values: Sequence) -> GroupElement:
    """``w(g1, ..., gn)``; values may be element indices or :class:`GroupElement`."""
    if len(values) != w.rank:
        raise ValueError(f"word has rank {w.rank} but {len(values)} values were given")
    cols = [np.asarray(int(v)) for v in values]
    return GroupElement(G, int(evaluate_many(w, G, cols)))


# -- group specs -----------------------------------------------------------


def from_cayley_json(data: Mapping) -> FiniteGroup:
    table = np.asarray(data["table"], dtype=np.int64)
    if "order" in data and int(data["order"]) != table.shape[0]:
        raise GroupError("declared order does not match the table")
    labels = data.get("labels")
    n = table.shape[0]
    # move the identity to index 0 if the file puts it elsewhere
    ident = [i for i in range(n) if (table[i] == np.arange(n)).all()]
    if len(ident) != 1:
        raise GroupError("table has no unique identity element")
    e = ident[0]
    if e != 0:
        perm = [e] + [i for i in range(n) if i != e]
        pos = np.empty(n, dtype=np.int64)
        pos[perm] = np.arange(n)
        table = pos[table[np.ix_(perm, perm)]]
        if labels is not None:
            labels = [labels[i] for i in perm]
    return FiniteGroup(table, labels, data.get("name", "cayley"))


def to_cayley_json(G: FiniteGroup) -> dict:
    return {"order": G.order, "table": G.table.tolist(), "labels": G.labels}


def _split_product(body: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "x" and depth == 0:
            a, b = body[:i].strip(), body[i + 1:].strip()
            if a.startswith("(") and a.endswith(")") and b.startswith("(") and b.endswith(")"):
                return a[1:-1], b[1:-1]
    raise GroupError(f"cannot parse product spec {body!r}")


def _kv(body: str) -> dict[str, str]:
    out = {}
    for part in body.split(","):
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    return out


def parse_group(spec: str, base: Path | None = None) -> FiniteGroup:
    """Build a group from a spec string such as ``"heisenberg:p=3,k=1"`` or
    ``"product:(dihedral:8)x(cyclic:3)"``."""
    spec = spec.strip()
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    base = base or Path.cwd()
    try:
        if kind == "cyclic":
            G = cyclic(int(body))
        elif kind == "abelian":
            G = abelian([int(k) for k in body.split(",")])
        elif kind == "heisenberg":
            kv = _kv(body)
            G = heisenberg(int(kv["p"]), int(kv.get("k", 1)))
        elif kind == "dihedral":
            G = dihedral(int(body))
        elif kind == "quaternion":
            if int(body or 8) != 8:
                raise GroupError("only the quaternion group of order 8 is supported")
            G = quaternion8()
        elif kind == "modular":
            if int(body or 16) != 16:
                raise GroupError("only the modular group of order 16 is supported")
            G = modular16()
        elif kind == "symmetric":
            if int(body) != 3:
                raise GroupError("only the symmetric group of degree 3 is supported")
            G = symmetric3()
        elif kind == "product":
            a, b = _split_product(body)
            G = direct_product(parse_group(a, base), parse_group(b, base))
        elif kind == "semidirect":
            path = base / _kv(body)["file"]
            data = json.loads(path.read_text())
            A = parse_group(data["A"], path.parent)
            H = parse_group(data["H"], path.parent)
            G = semidirect_product(A, H, data["action"])
        elif kind == "cayley":
            path = base / _kv(body)["file"]
            G = from_cayley_json(json.loads(path.read_text()))
        else:
            raise GroupError(f"unknown group kind {kind!r}")
    except (KeyError, ValueError) as exc:
        if isinstance(exc, GroupError):
            raise
        raise GroupError(f"bad group spec {spec!r}: {exc}") from exc
    G.name = spec
    return G

