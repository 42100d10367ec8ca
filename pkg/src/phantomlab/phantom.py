"""Desk-scale derived category of the integers.

Objects are bounded complexes of finitely generated free groups; an
ind-object is a sequential tower of them.  A map into ``HB`` from an
ind-object is phantom when it vanishes on every stage, and the phantom
group is computed as ``PExt(H_{-1} X, B)``, i.e. as ``lim^1`` of a Hom
tower.  Differentials lower degree: ``d_n : C_n -> C_{n-1}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Union

from . import snf
from .fgab import FgGroup, GroupMap, canonicalize_orders, cokernel_of_columns
from .homalg import ExtClass, ext_group, lift_relations, pushforward, realize_extension
from .padic import AffineTail, PadicInt, SumFamily, ValSeq, classify
from .towers import (
    Constant,
    CyclicPowers,
    DirectTower,
    Lim1Report,
    UnsupportedTower,
    constant_tower,
    pext_ind,
    prufer_tower,
)

Coefficients = Union[FgGroup, SumFamily]


class NotAComplex(ValueError):
    pass


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``C_hi -> ... -> C_lo`` with ``differentials[n]`` a ``rank(n-1) x rank(n)`` matrix."""

    lo: int
    hi: int
    ranks: tuple[int, ...]
    differentials: dict[int, snf.Matrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise NotAComplex("empty degree range")
        object.__setattr__(self, "ranks", tuple(self.ranks))
        if len(self.ranks) != self.hi - self.lo + 1:
            raise NotAComplex("one rank per degree is required")
        diffs = {}
        for n in range(self.lo + 1, self.hi + 1):
            m = self.differentials.get(n)
            rows, cols = self.rank(n - 1), self.rank(n)
            if m is None:
                m = snf.zeros(rows, cols)
            m = [list(r) for r in m]
            if len(m) != rows or any(len(r) != cols for r in m):
                raise NotAComplex(f"d_{n} must be {rows} x {cols}")
            diffs[n] = m
        extra = set(self.differentials) - set(diffs)
        if extra:
            raise NotAComplex(f"differentials outside the degree range: {sorted(extra)}")
        object.__setattr__(self, "differentials", diffs)
        for n in range(self.lo + 2, self.hi + 1):
            sq = snf.matmul(self.d(n - 1), self.d(n), cols=self.rank(n))
            if any(any(r) for r in sq):
                raise NotAComplex(f"d_{n - 1} d_{n} != 0")

    def rank(self, n: int) -> int:
        return self.ranks[n - self.lo] if self.lo <= n <= self.hi else 0

    def d(self, n: int) -> snf.Matrix:
        if self.lo < n <= self.hi:
            return self.differentials[n]
        return snf.zeros(self.rank(n - 1), self.rank(n))

    def to_dict(self) -> dict:
        return {
            "degrees": [self.lo, self.hi],
            "ranks": list(self.ranks),
            "differentials": [self.differentials[n] for n in range(self.lo + 1, self.hi + 1)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ChainComplex:
        lo, hi = d["degrees"]
        diffs = d.get("differentials", [])
        if len(diffs) not in (0, hi - lo):
            raise NotAComplex(f"expected {hi - lo} differentials, got {len(diffs)}")
        return cls(lo, hi, tuple(d["ranks"]), {lo + 1 + i: m for i, m in enumerate(diffs)})


@dataclass(frozen=True)
class Homology:
    group: FgGroup
    cycles: snf.Matrix  # rank(n) x z, columns span ker d_n
    to_canonical: snf.Matrix
    section: snf.Matrix

    def class_of(self, v: list[int]) -> Any:
        z = len(self.cycles[0]) if self.cycles else 0
        x = snf.solve(self.cycles, v, cols=z) if self.cycles else []
        if x is None:
            raise ValueError("vector is not a cycle")
        return self.group.element(snf.matvec(self.to_canonical, x) if self.group.ngens else [])

    def representative(self, e) -> list[int]:
        c = snf.matvec(self.section, list(e.coords)) if self.section else []
        return snf.matvec(self.cycles, c) if self.cycles else []


def homology_data(C: ChainComplex, n: int) -> Homology:
    rn = C.rank(n)
    if rn == 0:
        return Homology(FgGroup.trivial(), [], [], [])
    if C.rank(n - 1):
        K = snf.from_columns(snf.smith(C.d(n), cols=rn).kernel_basis(), rn)
    else:
        K = snf.identity(rn)
    z = len(K[0]) if K and K[0] else 0
    if z == 0:
        return Homology(FgGroup.trivial(), K, [], [])
    rel = []
    dn1 = C.d(n + 1)
    for col in snf.columns(dn1) if dn1 and dn1[0] else []:
        x = snf.solve(K, col, cols=z)
        if x is None:  # pragma: no cover - d^2 = 0 was checked
            raise NotAComplex("boundary is not a cycle")
        rel.append(x)
    pres = cokernel_of_columns(snf.from_columns(rel, z) if rel else [[] for _ in range(z)], z)
    return Homology(pres.group, K, pres.to_canonical, pres.section)


def homology(C: ChainComplex, n: int) -> FgGroup:
    """``H_n = ker d_n / im d_{n+1}`` in canonical form."""
    return homology_data(C, n).group


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict[int, snf.Matrix]

    def __post_init__(self) -> None:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        comps = {}
        for n in range(lo, hi + 1):
            m = self.components.get(n) or snf.zeros(self.target.rank(n), self.source.rank(n))
            comps[n] = [list(r) for r in m]
        object.__setattr__(self, "components", comps)
        for n in range(lo + 1, hi + 1):
            a = snf.matmul(self.target.d(n), self.f(n), cols=self.source.rank(n))
            b = snf.matmul(self.f(n - 1), self.source.d(n), cols=self.source.rank(n))
            if a != b:
                raise NotAComplex(f"not a chain map in degree {n}")

    def f(self, n: int) -> snf.Matrix:
        return self.components.get(n) or snf.zeros(self.target.rank(n), self.source.rank(n))

    def induced(self, n: int) -> GroupMap:
        hs, ht = homology_data(self.source, n), homology_data(self.target, n)
        images = []
        for g in hs.group.gens():
            v = hs.representative(g)
            w = snf.matvec(self.f(n), v) if self.target.rank(n) else []
            images.append(ht.class_of(w) if ht.group.ngens else [])
        return GroupMap.from_images(hs.group, ht.group, images)


def em_object(B: FgGroup, n: int = 0) -> ChainComplex:
    """Two-term free resolution of ``B`` with ``H_n = B``."""
    g, t = B.ngens, B.torsion_rank
    if t == 0:
        return ChainComplex(n, n, (g,))
    R = snf.zeros(g, t)
    for i, d in enumerate(B.invariant_factors):
        R[i][i] = d
    return ChainComplex(n, n + 1, (g, t), {n + 1: R})


def em_map(f: GroupMap, n: int = 0) -> ChainMap:
    """Chain map between resolutions lifting ``f``."""
    src, tgt = em_object(f.source, n), em_object(f.target, n)
    return ChainMap(src, tgt, {n: f.matrix, n + 1: lift_relations(f)})


# ---------------------------------------------------------------------------
# ind-objects


@dataclass(frozen=True)
class ResolutionTail:
    """Stage ``k`` is the resolution of ``tower.stage(k)`` placed in ``degree``."""

    tower: DirectTower
    degree: int


@dataclass(frozen=True, eq=False)
class IndComplex:
    """A sequential tower of complexes.

    Either an explicit prefix of complexes and chain maps with a constant
    tail, or the stagewise resolution of a tower of groups.
    """

    prefix: tuple[ChainComplex, ...] = ()
    maps: tuple[ChainMap, ...] = ()
    tail: Union[Constant, ResolutionTail] = field(default_factory=Constant)

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "maps", tuple(self.maps))
        if isinstance(self.tail, ResolutionTail):
            if self.prefix or self.maps:
                raise UnsupportedTower("resolution towers take no explicit prefix")
            return
        if not self.prefix or len(self.maps) != len(self.prefix) - 1:
            raise UnsupportedTower("expected one chain map fewer than stages")
        for k, m in enumerate(self.maps):
            if m.source is not self.prefix[k] or m.target is not self.prefix[k + 1]:
                raise UnsupportedTower(f"chain map {k} does not connect stages {k} and {k + 1}")

    @classmethod
    def resolution(cls, tower: DirectTower, degree: int = -1) -> IndComplex:
        return cls(tail=ResolutionTail(tower, degree))

    @classmethod
    def constant(cls, C: ChainComplex) -> IndComplex:
        return cls((C,), (), Constant())

    def stage(self, k: int) -> ChainComplex:
        if isinstance(self.tail, ResolutionTail):
            return em_object(self.tail.tower.stage(k), self.tail.degree)
        return self.prefix[min(k, len(self.prefix) - 1)]

    def map(self, k: int) -> ChainMap:
        if isinstance(self.tail, ResolutionTail):
            return em_map(self.tail.tower.map(k), self.tail.degree)
        if k < len(self.maps):
            return self.maps[k]
        C = self.prefix[-1]
        return ChainMap(C, C, {n: snf.identity(C.rank(n)) for n in range(C.lo, C.hi + 1)})

    def __str__(self) -> str:
        if isinstance(self.tail, ResolutionTail):
            return f"M({self.tail.tower}, {self.tail.degree})"
        return f"ind-complex with {len(self.prefix)} explicit stages"


def moore_tower(p: int) -> IndComplex:
    """Stages ``Z --p^k--> Z`` in degrees ``0, -1``; ``H_{-1}`` is ``Z/p^∞``."""
    return IndComplex.resolution(prufer_tower(p), -1)


def homology_tower(X: IndComplex, n: int, *, check: int = 4) -> DirectTower:
    """The tower ``H_n(X_k)``; resolution tails are checked on ``check`` stages."""
    if isinstance(X.tail, ResolutionTail):
        T, deg = X.tail.tower, X.tail.degree
        for k in range(check):
            h = homology(X.stage(k), n)
            want = T.stage(k) if n == deg else FgGroup.trivial()
            if h != want:  # pragma: no cover - guarded by em_object tests
                raise NotAComplex(f"stage {k} has H_{n} = {h}, expected {want}")
        return T if n == deg else constant_tower(FgGroup.trivial())
    groups = [homology(C, n) for C in X.prefix]
    maps = [m.induced(n) for m in X.maps]
    return DirectTower(tuple(groups), tuple(maps), Constant())


@dataclass(frozen=True)
class PhantomReport:
    X: str
    B: str
    pext_result: Lim1Report
    h_tower: DirectTower = field(compare=False)

    @property
    def is_zero(self) -> bool:
        return self.pext_result.is_zero

    def to_dict(self) -> dict:
        return {"X": self.X, "B": self.B, "H_-1": str(self.h_tower), "pext": self.pext_result.to_dict()}


def phantom_group(X: IndComplex, B: Coefficients, *, truncation: int = 20, precision: int = 40) -> PhantomReport:
    """Phantom maps ``X -> HB`` as ``PExt(H_{-1} X, B)``."""
    T = homology_tower(X, -1)
    return PhantomReport(str(X), str(B), pext_ind(T, B, truncation=truncation, precision=precision), T)


@dataclass(frozen=True)
class PhantomEM:
    k: int
    A: str
    B: str
    is_zero: bool
    group: str
    report: PhantomReport

    def to_dict(self) -> dict:
        return {"k": self.k, "A": self.A, "B": self.B, "is_zero": self.is_zero, "group": self.group,
                "report": self.report.to_dict()}


def phantom_em(k: int, A: DirectTower, B: Coefficients, *, truncation: int = 20, precision: int = 40) -> PhantomEM:
    """Phantom maps ``Σ^k HA -> HB`` for ``A = colim`` of a tower."""
    rep = phantom_group(IndComplex.resolution(A, k), B, truncation=truncation, precision=precision)
    zero = rep.is_zero
    group = "0" if zero else (rep.pext_result.lim1_description or "unknown")
    return PhantomEM(k, str(A), str(B), zero, group, rep)


# ---------------------------------------------------------------------------
# composites of phantoms, stage by stage


@dataclass(frozen=True)
class PhantomRep:
    """A map ``M(colim T, -1) -> HB`` for a family ``B``, given by ``a`` in ``∏ Z_p``.

    On stage ``Z/p^e`` it restricts to the class with cocycle
    ``(a_j mod p^f(j))_j`` in ``Ext(Z/p^e, B) = B / p^e B``.
    """

    source: DirectTower
    family: SumFamily
    rep: ValSeq

    def __post_init__(self) -> None:
        t = self.source.tail
        if not isinstance(t, CyclicPowers) or t.p != self.family.p or self.source.L:
            raise UnsupportedTower("source must be a cyclic p-power tower at the family prime")
        if not classify(self.rep, self.family)["v_to_inf"]:
            raise ValueError("representative does not define a class in Ext(Z/p^∞, B)")

    @property
    def is_phantom(self) -> bool:
        return classify(self.rep, self.family)["v_minus_f_nonneg"]

    def stage_exponent(self, k: int) -> int:
        return self.source.tail.exponent(k)

    def stage_class(self, k: int, J: int) -> ExtClass:
        B = self.family
        BJ = B.truncation(J)
        P = _truncation_projection(B, J)
        A = self.source.stage(k)
        ext = ext_group(A, BJ)
        if not A.ngens:
            return ext.zero
        naive = [self.rep.entry(j).value % B.p ** B.exponent(j) for j in range(J)]
        c = BJ.element(snf.matvec(P, naive) if BJ.ngens else [])
        return ext.class_of_cocycle([c])

    def tail_stage_null(self, k: int, J: int) -> bool:
        """Coordinates ``j >= J`` of the stage-``k`` restriction vanish."""
        e = self.stage_exponent(k)
        B = self.family
        x = self.rep.materialize(J)
        t = x.tail
        if t is None:
            return True
        j = J
        while True:
            v = t.exponent(j)
            if v >= e:
                return True
            if v < min(e, B.exponent(j)):
                return False
            if t.alpha == 0 and B.alpha == 0:
                return True
            j += 1

    def to_dict(self) -> dict:
        return {"source": self.source.to_dict(), **self.family.to_dict(), "rep": self.rep.to_dict()}


def _truncation_projection(B: SumFamily, J: int) -> snf.Matrix:
    return canonicalize_orders(B.truncation_orders(J)).to_canonical


@dataclass(frozen=True)
class ScalarMap:
    """Multiplication by ``m`` on ``HB``; not phantom unless it is zero."""

    m: int
    kind = "scalar"


@dataclass(frozen=True)
class SumPhantom:
    """A phantom ``HB_1 -> Σ HB_2`` given by ``lim^1`` data ``h_J in Hom(B_1,J, B_2)``.

    By the lim^1 sequence its restriction to every finite stage ``B_1,J`` is
    the zero extension.
    """

    target: FgGroup
    homs: tuple[tuple[int, ...], ...] = ()
    kind = "sum_phantom"

    def stage_class(self, BJ: FgGroup) -> ExtClass:
        return ext_group(BJ, self.target).zero


@dataclass(frozen=True)
class ZeroMap:
    kind = "zero"


Second = Union[ScalarMap, SumPhantom, ZeroMap]


@dataclass(frozen=True)
class Ext2Certificate:
    """Splitting of the spliced two-step extension on one stage.

    ``R`` resolves the stage and has trivial kernel, so the resolution has
    length one and ``Ext^2`` of the stage vanishes; ``lift`` carries the
    cocycle of ``f`` through the middle group of ``g``'s extension.
    """

    stage: int
    relation_matrix: snf.Matrix
    kernel_rank: int
    lift: list[int]
    lift_ok: bool

    def to_dict(self) -> dict:
        return {"stage": self.stage, "relation_matrix": self.relation_matrix, "kernel_rank": self.kernel_rank,
                "lift": self.lift, "lift_ok": self.lift_ok}


@dataclass(frozen=True)
class CompositeCertificate:
    truncation: int
    stages_checked: int
    f_phantom: bool
    g_kind: str
    all_null: bool
    counterexample: dict | None
    ext2: tuple[Ext2Certificate, ...]

    @property
    def ok(self) -> bool:
        return self.all_null and all(c.lift_ok and c.kernel_rank == 0 for c in self.ext2)

    def to_dict(self) -> dict:
        return {
            "truncation": self.truncation, "stages_checked": self.stages_checked, "f_phantom": self.f_phantom,
            "g_kind": self.g_kind, "all_null": self.all_null, "ok": self.ok,
            "counterexample": self.counterexample, "ext2": [c.to_dict() for c in self.ext2],
        }


def _ext2_certificate(k: int, fk: ExtClass, g_stage: ExtClass) -> Ext2Certificate:
    A = fk.ext.source
    R = em_object(A, 0).d(1) if A.torsion_rank else []
    kernel_rank = len(snf.smith(R, cols=A.torsion_rank).kernel_basis()) if R else 0
    s = realize_extension(g_stage)
    lift: list[int] = []
    ok = True
    for c in fk.cocycle():
        y = s.proj.lift(c)
        if y is None:
            ok = False
            break
        ok = ok and s.proj(y) == c
        lift.extend(y.coords)
    return Ext2Certificate(k, R, kernel_rank, lift, ok)


def composite_stagewise_check(f: PhantomRep | None, g: Second, *, truncation: int = 20,
                              stages: int | None = None) -> CompositeCertificate:
    """Check ``g ∘ f`` vanishes on the first ``stages`` stages of the source tower.

    ``f=None`` is the zero map.  Family targets are cut to ``truncation``
    summands; coordinates past the cut are decided from the tail.
    """
    J = truncation
    stages = truncation if stages is None else stages
    ext2 = []
    counter = None
    f_phantom = True if f is None else f.is_phantom
    for k in range(stages):
        if f is None:
            continue
        fk = f.stage_class(k, J)
        BJ = fk.ext.target
        if isinstance(g, ScalarMap):
            comp = pushforward(fk, GroupMap.multiplication(BJ, g.m))
            null = comp.is_zero() and (g.m == 0 or f.tail_stage_null(k, J))
        elif isinstance(g, SumPhantom):
            # composite lies in Ext^2 of the stage; it vanishes, and f_k does too
            null = fk.is_zero() and f.tail_stage_null(k, J)
            ext2.append(_ext2_certificate(k, fk, g.stage_class(BJ)))
        else:
            null = True
        if not null and counter is None:
            counter = {"stage": k, "class": list(fk.value.coords)}
    return CompositeCertificate(J, stages, f_phantom, g.kind, counter is None, counter, tuple(ext2))


def random_phantom_pair(rng: random.Random, *, precision: int = 40) -> tuple[PhantomRep, SumPhantom]:
    """A phantom ``f`` out of the Moore tower and a phantom ``g`` out of its target."""
    p = rng.choice([2, 3])
    fam = SumFamily(p, rng.choice([1, 1, 2]), rng.choice([0, 1]))
    L = rng.randint(0, 4)
    prefix = []
    for j in range(L):
        extra = rng.randint(0, 2)
        unit = rng.randrange(1, p**precision)
        while unit % p == 0:
            unit += 1
        prefix.append(PadicInt(p, unit * p ** (fam.exponent(j) + extra), precision))
    # slope and offset at least the family's keep v(a_j) >= f(j) on the tail
    tail = AffineTail(fam.alpha + rng.randint(0, 1), fam.beta + rng.randint(0, 2))
    f = PhantomRep(prufer_tower(p), fam, ValSeq(p, tuple(prefix), tail, precision))
    B2 = FgGroup.cyclic(p ** rng.randint(1, 3))
    g = SumPhantom(B2, tuple(tuple(rng.randrange(p) for _ in range(3)) for _ in range(3)))
    return f, g


# ---------------------------------------------------------------------------
# ⊕Z -> ∏Z does not split


@dataclass(frozen=True)
class NonsplitCertificate:
    j: int
    truncation: int
    divisibility: dict[int, bool]
    obstruction: dict
    valid: bool

    def to_dict(self) -> dict:
        return {"j": self.j, "truncation": self.truncation,
                "divisibility": {str(i): ok for i, ok in self.divisibility.items()},
                "obstruction": self.obstruction, "valid": self.valid,
                "conclusion": "⊕Z -> ∏Z -> C does not split; the associated phantom is nonzero" if self.valid else None}


def _shifted(i: int, T: int) -> list[int]:
    """``y_k = 2^(k-i)`` for ``k >= i``; the first ``i`` entries are dropped."""
    return [0 if k < i else 2 ** (k - i) for k in range(T)]


def nonsplit_certificate(j: int, truncation: int = 40) -> NonsplitCertificate:
    """Divisibility of ``(1, 2, 4, 8, ...)`` modulo ``⊕Z`` and the obstruction in ``∏Z``.

    Sequences are integer prefixes of length ``truncation`` with the tail
    rule ``a_k = 2^k`` (or ``y_k = 2^(k-i)``) beyond; the tail identity
    ``2^i y_k = a_k`` holds symbolically.
    """
    if j < 1:
        raise ValueError("j must be positive")
    T = truncation
    if j > T:
        raise ValueError("j exceeds the truncation")
    x = [2**k for k in range(T)]
    div = {}
    for i in range(1, j + 1):
        y = _shifted(i, T)
        diff = [(2**i) * a - b for a, b in zip(y, x)]
        # the difference is supported on the dropped entries, so lies in ⊕Z
        div[i] = all(d == 0 for d in diff[i:]) and any(diff[:i])
    # in ∏Z itself: divisibility by 2^(T+1) would need v(x_0) >= T+1
    v0 = 0
    obstruction = {
        "i": T + 1,
        "entry": 0,
        "valuation": v0,
        "required": T + 1,
        "obstructed": v0 < T + 1,
        # any finite-support change below s leaves x_s = 2^s, not divisible by 2^(s+1)
        "support_bound_checks": all((2**s) % 2 ** (s + 1) for s in range(T)),
    }
    valid = all(div.values()) and obstruction["obstructed"] and obstruction["support_bound_checks"]
    return NonsplitCertificate(j, T, div, obstruction, valid)
