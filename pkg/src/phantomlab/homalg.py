"""Hom and Ext of finitely generated abelian groups.

Both functors are computed from the canonical presentation
``0 -> Z^t --R--> Z^n -> A -> 0`` where ``R`` is the diagonal matrix of
invariant factors.  Because ``R`` is diagonal, ``Hom(A, B)`` and
``Ext(A, B)`` split into cyclic pieces indexed by pairs of generators:

* ``Hom(Z/d, Z/e) = Z/gcd(d, e)`` generated by ``1 -> e/gcd``;
* ``Ext(Z/d, Z/e) = Z/gcd(d, e)`` and ``Ext(Z/d, Z) = Z/d``.

An extension class is stored as a cocycle ``c = (c_1, ..., c_t)`` in ``B^t``:
the value of the cocycle on the ``j``-th relation of ``A``.  The extension it
defines is ``C = (B + Z^n) / <d_j g_j - c_j>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

from . import snf
from .fgab import (
    Element,
    FgGroup,
    GroupMap,
    NotExact,
    Presentation,
    ShortExact,
    Subgroup,
    canonicalize_orders,
    cokernel,
    cokernel_of_columns,
    direct_sum,
    map_factorization,
    n_torsion_and_quotient,
    quotient,
    subgroup_generated,
    zero_subgroup,
)


# ---------------------------------------------------------------------------
# Hom


@dataclass(frozen=True, eq=False)
class HomGroup:
    """``Hom(A, B)`` with canonical generators realized as maps."""

    source: FgGroup
    target: FgGroup
    group: FgGroup
    _pres: Presentation = field(repr=False)
    _pieces: tuple[tuple[int, int, int], ...] = field(repr=False)  # (row i, col j, generator value)

    @property
    def basis(self) -> list[GroupMap]:
        return [self.to_map(g) for g in self.group.gens()]

    def to_map(self, e: Element) -> GroupMap:
        naive = self._pres.lift(e)
        m = snf.zeros(self.target.ngens, self.source.ngens)
        for c, (i, j, val) in zip(naive, self._pieces):
            m[i][j] += c * val
        return GroupMap(self.source, self.target, m)

    def coords(self, f: GroupMap) -> Element:
        if (f.source, f.target) != (self.source, self.target):
            raise ValueError("map does not belong to this Hom group")
        naive = []
        for i, j, val in self._pieces:
            x = f.matrix[i][j]
            if x % val:
                raise ValueError("matrix entry not a multiple of the piece generator")
            naive.append(x // val)
        return self._pres.project(naive)

    def elements(self):
        for e in self.group.elements():
            yield self.to_map(e)


def hom_group(a: FgGroup, b: FgGroup) -> HomGroup:
    pieces = []
    orders = []
    for j, d in enumerate(a.orders):
        for i, e in enumerate(b.orders):
            if d == 0:
                pieces.append((i, j, 1))
                orders.append(e)
            elif e == 0:
                continue
            else:
                g = math.gcd(d, e)
                if g == 1:
                    continue
                pieces.append((i, j, e // g))
                orders.append(g)
    pres = canonicalize_orders(orders)
    return HomGroup(a, b, pres.group, pres, tuple(pieces))


# ---------------------------------------------------------------------------
# Ext


@dataclass(frozen=True, eq=False)
class ExtGroup:
    """``Ext(A, B)`` presented as cocycles ``B^t`` modulo ``d_j B``.

    This object is the presentation context shared by every class in the
    group, so coordinates stay consistent between realization, induced maps
    and Baer sums.
    """

    source: FgGroup  # A
    target: FgGroup  # B
    group: FgGroup
    _pres: Presentation = field(repr=False)
    _pieces: tuple[tuple[int, int], ...] = field(repr=False)  # (torsion index j of A, generator i of B)

    @property
    def A(self) -> FgGroup:
        return self.source

    @property
    def B(self) -> FgGroup:
        return self.target

    def class_of_cocycle(self, cocycle: Sequence[Element | Sequence[int]]) -> ExtClass:
        t = self.source.torsion_rank
        if len(cocycle) != t:
            raise ValueError(f"cocycle needs {t} components")
        cs = [list(c.coords) if isinstance(c, Element) else list(c) for c in cocycle]
        naive = [cs[j][i] for j, i in self._pieces]
        return ExtClass(self, self._pres.project(naive))

    def cocycle(self, value: Element) -> list[Element]:
        """Canonical cocycle representing ``value``."""
        naive = self._pres.lift(value)
        cs = [[0] * self.target.ngens for _ in range(self.source.torsion_rank)]
        for c, (j, i) in zip(naive, self._pieces):
            cs[j][i] += c
        return [self.target.element(c) for c in cs]

    def __call__(self, *coords: int) -> ExtClass:
        return ExtClass(self, self.group.element(coords))

    def element(self, value: Element | Sequence[int]) -> ExtClass:
        if not isinstance(value, Element):
            value = self.group.element(value)
        return ExtClass(self, value)

    @property
    def zero(self) -> ExtClass:
        return ExtClass(self, self.group.zero)

    def classes(self):
        for e in self.group.elements():
            yield ExtClass(self, e)

    def same_pair(self, other: ExtGroup) -> bool:
        return (self.source, self.target) == (other.source, other.target)


def ext_group(a: FgGroup, b: FgGroup) -> ExtGroup:
    pieces = []
    orders = []
    for j, d in enumerate(a.invariant_factors):
        for i, e in enumerate(b.orders):
            g = math.gcd(d, e)
            if g == 1:
                continue
            pieces.append((j, i))
            orders.append(g)
    pres = canonicalize_orders(orders)
    return ExtGroup(a, b, pres.group, pres, tuple(pieces))


@dataclass(frozen=True, eq=False)
class ExtClass:
    ext: ExtGroup
    value: Element

    def __post_init__(self) -> None:
        if self.value.parent != self.ext.group:
            raise ValueError("value does not lie in the Ext group")

    @property
    def pair(self) -> tuple[FgGroup, FgGroup]:
        return self.ext.source, self.ext.target

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def cocycle(self) -> list[Element]:
        return self.ext.cocycle(self.value)

    def __add__(self, other: ExtClass) -> ExtClass:
        return baer_sum(self, other)

    def __neg__(self) -> ExtClass:
        return ExtClass(self.ext, -self.value)

    def __sub__(self, other: ExtClass) -> ExtClass:
        return baer_sum(self, -other)

    def __rmul__(self, n: int) -> ExtClass:
        return ExtClass(self.ext, n * self.value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtClass):
            return NotImplemented
        return self.ext.same_pair(other.ext) and self.value.coords == other.value.coords

    def __hash__(self) -> int:
        return hash((self.ext.source, self.ext.target, self.value.coords))

    def __repr__(self) -> str:
        return f"ExtClass(Ext({self.ext.source}, {self.ext.target}) = {self.ext.group}, {list(self.value.coords)})"


def baer_sum(u: ExtClass, v: ExtClass) -> ExtClass:
    """Sum of two extension classes of the same pair ``(A, B)``."""
    if not u.ext.same_pair(v.ext):
        raise ValueError(f"Baer sum of classes in different groups: {u.pair} vs {v.pair}")
    return ExtClass(u.ext, u.value + v.value)


# ---------------------------------------------------------------------------
# functoriality


def lift_relations(f: GroupMap) -> snf.Matrix:
    """The degree-one part of a chain map lifting ``f: A' -> A`` to resolutions.

    Returns ``F1`` (``t x t'``) with ``R @ F1 == F0 @ R'`` where ``F0`` is the
    matrix of ``f``.
    """
    src, tgt = f.source, f.target
    F1 = snf.zeros(tgt.torsion_rank, src.torsion_rank)
    for jp, dp in enumerate(src.invariant_factors):
        for i, d in enumerate(tgt.orders):
            x = dp * f.matrix[i][jp]
            if d == 0:
                if x:
                    raise ValueError("map is not well defined")
                continue
            F1[i][jp] = x // d
    return F1


def induced(
    f: GroupMap,
    *,
    functor: Literal["hom", "ext"],
    variable: Literal["contravariant", "covariant"],
    other: FgGroup,
) -> GroupMap:
    """The map ``f`` induces on Hom or Ext with the other variable fixed.

    ``variable="contravariant"`` means ``f: A' -> A`` acts on the first slot
    (restriction, ``Hom(A, B) -> Hom(A', B)``); ``"covariant"`` means
    ``f: B -> B'`` acts on the second slot (pushforward).
    """
    if functor == "hom":
        if variable == "contravariant":
            src, dst = hom_group(f.target, other), hom_group(f.source, other)
            images = [dst.coords(phi @ f) for phi in src.basis]
        else:
            src, dst = hom_group(other, f.source), hom_group(other, f.target)
            images = [dst.coords(f @ phi) for phi in src.basis]
        return GroupMap.from_images(src.group, dst.group, images)
    if functor == "ext":
        if variable == "contravariant":
            src, dst = ext_group(f.target, other), ext_group(f.source, other)
            images = [restrict(u, f).value for u in _gens(src)]
        else:
            src, dst = ext_group(other, f.source), ext_group(other, f.target)
            images = [pushforward(u, f).value for u in _gens(src)]
        return GroupMap.from_images(src.group, dst.group, images)
    raise ValueError(f"unknown functor {functor!r}")


def _gens(ext: ExtGroup) -> list[ExtClass]:
    return [ExtClass(ext, g) for g in ext.group.gens()]


def restrict(u: ExtClass, f: GroupMap, target_ext: ExtGroup | None = None) -> ExtClass:
    """``f^* u`` for ``f: A' -> A``."""
    if f.target != u.ext.source:
        raise ValueError("restriction map must land in the first variable of u")
    dst = target_ext or ext_group(f.source, u.ext.target)
    F1 = lift_relations(f)
    c = u.cocycle()
    B = u.ext.target
    new = []
    for jp in range(f.source.torsion_rank):
        acc = B.zero
        for i in range(f.target.torsion_rank):
            if F1[i][jp]:
                acc = acc + F1[i][jp] * c[i]
        new.append(acc)
    return dst.class_of_cocycle(new)


def pushforward(u: ExtClass, g: GroupMap, target_ext: ExtGroup | None = None) -> ExtClass:
    """``g_* u`` for ``g: B -> B'``."""
    if g.source != u.ext.target:
        raise ValueError("pushforward map must start at the second variable of u")
    dst = target_ext or ext_group(u.ext.source, g.target)
    return dst.class_of_cocycle([g(c) for c in u.cocycle()])


# ---------------------------------------------------------------------------
# extensions


def realize_extension(u: ExtClass) -> ShortExact:
    """The extension ``B -> C -> A`` classified by ``u``."""
    A, B = u.ext.source, u.ext.target
    nb, na = B.ngens, A.ngens
    n = nb + na
    cols = []
    for i, e in enumerate(B.invariant_factors):
        c = [0] * n
        c[i] = e
        cols.append(c)
    for j, (d, cj) in enumerate(zip(A.invariant_factors, u.cocycle())):
        c = [0] * n
        for i, x in enumerate(cj.coords):
            c[i] = -x
        c[nb + j] = d
        cols.append(c)
    pres = cokernel_of_columns(snf.from_columns(cols, n), n)
    C = pres.group
    incl = GroupMap(B, C, [row[:nb] for row in pres.to_canonical])
    proj = GroupMap(C, A, [list(pres.section[nb + j]) for j in range(na)])
    return ShortExact(incl, proj)


def ext_class(s: ShortExact, ext: ExtGroup | None = None) -> ExtClass:
    """Class of a verified short exact sequence in ``Ext(A, B)``."""
    if not isinstance(s, ShortExact):
        raise NotExact("ext_class needs a verified ShortExact")
    A, B = s.quot, s.sub
    ext = ext or ext_group(A, B)
    cocycle = []
    for j, d in enumerate(A.invariant_factors):
        g = A.gens()[j]
        lift = s.proj.lift(g)
        b = s.incl.lift(d * lift)
        if b is None:  # pragma: no cover - excluded by exactness
            raise NotExact("lift does not return to the subgroup")
        cocycle.append(b)
    return ext.class_of_cocycle(cocycle)


def baer_sum_sequences(s1: ShortExact, s2: ShortExact) -> ShortExact:
    """The Baer sum built from middle groups: pull back over ``A``, push out over ``B``."""
    if (s1.sub, s1.quot) != (s2.sub, s2.quot):
        raise ValueError("Baer sum needs extensions of the same pair")
    A, B = s1.quot, s1.sub
    ds = direct_sum(s1.middle, s2.middle)
    i1, i2 = ds.inclusions
    p1, p2 = ds.projections
    diff = s1.proj @ p1 + (-(s2.proj @ p2))
    pull = map_factorization(diff).kernel
    P = pull.group
    # antidiagonal copy of B inside the pullback
    anti = [pull.coords(i1(s1.incl(b)) - i2(s2.incl(b))) for b in B.gens()]
    q = quotient(P, anti)
    E = q.group
    incl_imgs = [q.proj(pull.coords(i1(s1.incl(b)))) for b in B.gens()]
    incl = GroupMap.from_images(B, E, incl_imgs)
    to_A = s1.proj @ p1 @ pull.incl
    proj_imgs = [to_A(q.lift(e)) for e in E.gens()]
    proj = GroupMap.from_images(E, A, proj_imgs)
    return ShortExact(incl, proj)


def pullback_sequence(s: ShortExact, f: GroupMap) -> ShortExact:
    """The extension of ``f.source`` by ``B`` obtained by pulling ``s`` back along ``f``."""
    if f.target != s.quot:
        raise ValueError("pullback map must land in the quotient")
    ds = direct_sum(s.middle, f.source)
    ic, ia = ds.inclusions
    pc, pa = ds.projections
    pull = map_factorization(s.proj @ pc + (-(f @ pa))).kernel
    incl = GroupMap.from_images(s.sub, pull.group, [pull.coords(ic(s.incl(b))) for b in s.sub.gens()])
    proj = pa @ pull.incl
    return ShortExact(incl, proj)


def pushout_sequence(s: ShortExact, g: GroupMap) -> ShortExact:
    """The extension of ``A`` by ``g.target`` obtained by pushing ``s`` out along ``g``."""
    if g.source != s.sub:
        raise ValueError("pushout map must start at the subgroup")
    ds = direct_sum(g.target, s.middle)
    ib, ic = ds.inclusions
    rels = [ib(g(b)) - ic(s.incl(b)) for b in s.sub.gens()]
    q = quotient(ds.group, rels)
    incl = q.proj @ ib
    proj_imgs = [s.proj(ds.projections[1](q.lift(e))) for e in q.group.gens()]
    return ShortExact(incl, GroupMap.from_images(q.group, s.quot, proj_imgs))


# ---------------------------------------------------------------------------
# six-term sequence


POSITIONS = ("nB", "nC", "nA", "B/n", "C/n", "A/n")


@dataclass(frozen=True)
class SixTerm:
    """``0 -> nB -> nC -> nA -> B/n -> C/n -> A/n -> 0`` for a fixed ``n``."""

    n: int
    groups: tuple[FgGroup, ...]
    maps: tuple[GroupMap, ...]
    exact: dict[str, bool]

    @property
    def connecting(self) -> GroupMap:
        return self.maps[2]

    @property
    def is_exact(self) -> bool:
        return all(self.exact.values())


def _exact_at(incoming: GroupMap | None, outgoing: GroupMap | None, g: FgGroup) -> bool:
    img = incoming.image() if incoming is not None else zero_subgroup(g)
    if outgoing is None:
        return img.group == g
    ker = outgoing.kernel()
    return img.same_as(ker)


def six_term(s: ShortExact, n: int) -> SixTerm:
    if n < 1:
        raise ValueError("n must be positive")
    B, C, A = s.sub, s.middle, s.quot
    tb, tc, ta = (n_torsion_and_quotient(X, n) for X in (B, C, A))
    nB, nC, nA = tb.torsion, tc.torsion, ta.torsion
    qB, qC, qA = tb.quotient, tc.quotient, ta.quotient

    def restrict_map(f: GroupMap, src: Subgroup, dst: Subgroup) -> GroupMap:
        return GroupMap.from_images(src.group, dst.group, [dst.coords(f(src.incl(g))) for g in src.group.gens()])

    def mod_map(f: GroupMap, src, dst) -> GroupMap:
        return GroupMap.from_images(src.group, dst.group, [dst.proj(f(src.lift(g))) for g in src.group.gens()])

    m1 = restrict_map(s.incl, nB, nC)
    m2 = restrict_map(s.proj, nC, nA)
    conn = []
    for g in nA.group.gens():
        a = nA.incl(g)
        c = s.proj.lift(a)
        b = s.incl.lift(n * c)
        conn.append(qB.proj(b))
    m3 = GroupMap.from_images(nA.group, qB.group, conn)
    m4 = mod_map(s.incl, qB, qC)
    m5 = mod_map(s.proj, qC, qA)
    groups = (nB.group, nC.group, nA.group, qB.group, qC.group, qA.group)
    maps = (m1, m2, m3, m4, m5)
    exact = {}
    for k, name in enumerate(POSITIONS):
        inc = maps[k - 1] if k > 0 else None
        out = maps[k] if k < len(maps) else None
        exact[name] = _exact_at(inc, out, groups[k])
    return SixTerm(n, groups, maps, exact)


# ---------------------------------------------------------------------------
# Ulm subgroup


@dataclass(frozen=True)
class UlmSubgroup:
    subgroup: Subgroup
    modulus: int  # an n with nE meeting the torsion trivially

    @property
    def group(self) -> FgGroup:
        return self.subgroup.group


def ulm_subgroup(e: FgGroup) -> UlmSubgroup:
    """First Ulm subgroup ``∩_n nE``; always 0 for finitely generated ``E``.

    ``m * E`` for ``m`` the torsion exponent is torsion-free, and inside a
    free group the multiples ``k m E`` shrink to zero, so the intersection is
    trivial.  The torsion-freeness of ``m E`` is checked rather than assumed.
    """
    m = e.exponent
    mE = map_factorization(GroupMap.multiplication(e, m)).image
    if mE.group.torsion_rank:  # pragma: no cover - a finitely generated group never fails this
        raise AssertionError("m E has torsion")
    return UlmSubgroup(zero_subgroup(e), m)


def in_ulm_subgroup(x: Element) -> tuple[bool, int | None]:
    """Whether ``x`` lies in every ``nE``; otherwise an ``n`` with ``x`` not in ``nE``.

    Checking ``n`` over the divisors of the torsion exponent and one multiple
    larger than every free coordinate is exhaustive for finitely generated ``E``.
    """
    E = x.parent
    m = E.exponent
    big = m * (1 + max((abs(c) for c, d in zip(x.coords, E.orders) if d == 0), default=0))
    candidates = [d for d in range(2, m + 1) if m % d == 0]
    if big not in candidates:
        candidates.append(big)
    for n in candidates:
        if GroupMap.multiplication(E, n).lift(x) is None:
            return False, n
    return True, None
