"""Brute-force reference computations for small finite abelian groups.

Nothing here calls into phantomlab.  Groups are tuples of moduli, elements
are tuples of residues, and structure is recovered by counting elements
killed by powers of each prime.
"""
from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def invariant_factors(elementary: list[int]) -> tuple[int, ...]:
    """Combine prime-power orders into an invariant-factor chain."""
    by_prime: dict[int, list[int]] = {}
    for q in elementary:
        if q == 1:
            continue
        (p,) = prime_factors(q)
        by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * length
    for qs in by_prime.values():
        qs = sorted(qs, reverse=True)
        for i, q in enumerate(qs):
            out[length - 1 - i] *= q
    return tuple(out)


def abelian_groups(max_order: int) -> list[tuple[int, ...]]:
    """Invariant factors of every abelian group of order <= max_order, each once."""
    out = []
    for n in range(1, max_order + 1):
        choices = []
        for p, e in prime_factors(n).items():
            choices.append([[p**k for k in part] for part in partitions(e)])
        for combo in itertools.product(*choices):
            out.append(invariant_factors([q for part in combo for q in part]))
    return out


def elements(moduli: tuple[int, ...]):
    return list(itertools.product(*(range(m) for m in moduli)))


def scale(x, n, moduli):
    return tuple((n * a) % m for a, m in zip(x, moduli))


def add(x, y, moduli):
    return tuple((a + b) % m for a, b, m in zip(x, y, moduli))


def structure_of_subset(members, moduli, in_sub=None, sub_size=1) -> tuple[int, ...]:
    """Invariant factors of ``H / K`` for a subgroup ``H`` listed as ``members``.

    ``in_sub`` tests membership of ``K`` (default: the zero subgroup) and
    ``sub_size`` is ``|K|``.  Counts ``{x : p^i x in K}`` for each prime.
    """
    zero = tuple(0 for _ in moduli)
    in_sub = in_sub or (lambda x: x == zero)
    size = len(members) // sub_size
    elementary = []
    for p in prime_factors(size):
        counts = [1]
        i = 1
        while True:
            c = sum(1 for x in members if in_sub(scale(x, p**i, moduli))) // sub_size
            counts.append(c)
            if c == counts[-2] and i > 1:
                break
            i += 1
        ranks = []
        for a, b in zip(counts, counts[1:]):
            r, q = 0, b // a
            while q > 1:
                q //= p
                r += 1
            ranks.append(r)  # ranks[i-1] = number of cyclic factors of order >= p^i
        ranks.append(0)
        for i in range(1, len(ranks)):
            elementary += [p**i] * (ranks[i - 1] - ranks[i])
    return invariant_factors(elementary)


@lru_cache(maxsize=None)
def hom_cyclic(a: int, moduli: tuple[int, ...]) -> tuple[int, ...]:
    """Structure of ``Hom(Z/a, B)``: the generator goes anywhere in ``B[a]``."""
    members = [x for x in elements(moduli) if not any(scale(x, a, moduli))]
    return structure_of_subset(members, moduli)


@lru_cache(maxsize=None)
def ext_cyclic(a: int, moduli: tuple[int, ...]) -> tuple[int, ...]:
    """Structure of ``Ext(Z/a, B) = B/aB``."""
    all_x = elements(moduli)
    aB = {scale(x, a, moduli) for x in all_x}
    return structure_of_subset(all_x, moduli, aB.__contains__, len(aB))


def _combine(parts: list[tuple[int, ...]]) -> tuple[int, ...]:
    elementary = []
    for inv in parts:
        for d in inv:
            for p, e in prime_factors(d).items():
                elementary.append(p**e)
    return invariant_factors(elementary)


def elementary_divisors(inv: tuple[int, ...]) -> list[int]:
    out = []
    for d in inv:
        out += [p**e for p, e in prime_factors(d).items()]
    return out


def hom_structure(A: tuple[int, ...], B: tuple[int, ...]) -> tuple[int, ...]:
    """Hom out of each cyclic summand of ``A``, then additivity."""
    return _combine([hom_cyclic(a, B) for a in elementary_divisors(A)])


def ext_structure(A: tuple[int, ...], B: tuple[int, ...]) -> tuple[int, ...]:
    return _combine([ext_cyclic(a, B) for a in elementary_divisors(A)])


def count_homs(A: tuple[int, ...], B: tuple[int, ...]) -> int:
    """Number of homomorphisms, enumerating generator images of ``A`` as given."""
    n = 1
    for a in A:
        n *= sum(1 for x in elements(B) if not any(scale(x, a, B)))
    return n


def span_closure(gens, moduli) -> set:
    zero = tuple(0 for _ in moduli)
    seen = {zero}
    todo = deque([zero])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = add(x, g, moduli)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def cokernel_structure(relations: list[list[int]]) -> tuple[int, ...]:
    """Invariant factors of ``Z^n`` modulo the span of square, full-rank ``relations``.

    With ``D = |det|`` we have ``D Z^n`` inside the relation lattice, so the
    quotient is ``(Z/D)^n`` modulo the reduced relations.
    """
    n = len(relations)
    D = abs(det(relations))
    if D == 0:
        raise ValueError("relations must have full rank")
    if D == 1:
        return ()
    moduli = (D,) * n
    L = span_closure([tuple(x % D for x in r) for r in relations], moduli)
    return structure_of_subset(elements(moduli), moduli, L.__contains__, len(L))


def middle_structure(sub: tuple[int, ...], quot: tuple[int, ...], cocycle: list[tuple[int, ...]]) -> tuple[int, ...]:
    """The group ``(B + Z^t) / <e_i b_i, d_j g_j - c_j>`` by enumeration.

    Elements are pairs ``(b, k)`` with ``k`` in ``prod Z/d_j`` and the twisted
    addition carrying ``c_j`` whenever the ``j``-th coordinate wraps around.
    """
    B, A = sub, quot
    pts = [(b, k) for b in elements(B) for k in elements(A)]

    def plus(x, y):
        b = list(add(x[0], y[0], B))
        k = []
        for j, d in enumerate(A):
            s = x[1][j] + y[1][j]
            if s >= d:
                b = list(add(tuple(b), cocycle[j], B))
                s -= d
            k.append(s)
        return tuple(b), tuple(k)

    zero = (tuple(0 for _ in B), tuple(0 for _ in A))
    # orders and p-torsion counts through repeated addition
    def times(x, n):
        acc = zero
        for _ in range(n):
            acc = plus(acc, x)
        return acc

    size = len(pts)
    elementary = []
    for p in prime_factors(size):
        counts = [1]
        i = 1
        while True:
            c = sum(1 for x in pts if times(x, p**i) == zero)
            counts.append(c)
            if c == counts[-2] and i > 1:
                break
            i += 1
        ranks = []
        for a, b in zip(counts, counts[1:]):
            r, q = 0, b // a
            while q > 1:
                q //= p
                r += 1
            ranks.append(r)
        ranks.append(0)
        for i in range(1, len(ranks)):
            elementary += [p**i] * (ranks[i - 1] - ranks[i])
    return invariant_factors(elementary)


def valuation(n: int, p: int) -> int | None:
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
