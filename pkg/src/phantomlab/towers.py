"""Sequential towers of finitely generated groups with symbolic tails.

A tower is a finite prefix of stages and maps followed by a tail rule that
determines every later stage.  Supported tails:

* ``Constant``: the last prefix stage repeats under identity maps;
* ``CyclicPowers(p, a, b)``: stage ``k`` is ``Z/p^(ak+b)`` with maps
  ``x p^a``, the Prüfer tower being ``a=1, b=0``;
* ``Truncated``: nothing is known past the prefix.

``lim`` and ``lim^1`` are classified from the tail, and every
Mittag-Leffler level is re-checkable on concrete stages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Union

from sympy import isprime

from .fgab import FgGroup, GroupMap, Subgroup, subgroup_generated
from .homalg import hom_group, induced
from .padic import DEFAULT_PRECISION, PadicInt, SumFamily, completion_triple, pinf_witness

DEFAULT_TRUNCATION = 20


class UnsupportedTower(ValueError):
    pass


# ---------------------------------------------------------------------------
# tail rules


@dataclass(frozen=True)
class Constant:
    kind = "constant"


@dataclass(frozen=True)
class CyclicPowers:
    p: int
    alpha: int = 1
    beta: int = 0

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise UnsupportedTower(f"{self.p} is not prime")
        if self.alpha < 0 or self.beta < 0:
            raise UnsupportedTower("exponents must be non-negative")

    @property
    def kind(self) -> str:
        return "prufer" if (self.alpha, self.beta) == (1, 0) else "parametrized_cyclic"

    def exponent(self, k: int) -> int:
        return self.alpha * k + self.beta

    def stage(self, k: int) -> FgGroup:
        return FgGroup.cyclic(self.p ** self.exponent(k)) if self.exponent(k) else FgGroup.trivial()

    def map(self, k: int) -> GroupMap:
        src, dst = self.stage(k), self.stage(k + 1)
        if not src.ngens:
            return GroupMap.zero(src, dst)
        return GroupMap(src, dst, [[self.p**self.alpha]])


@dataclass(frozen=True)
class Truncated:
    kind = "truncated"


DirectTail = Union[Constant, CyclicPowers, Truncated]


# ---------------------------------------------------------------------------
# direct towers


@dataclass(frozen=True, eq=False)
class DirectTower:
    """``T_0 -> T_1 -> ...``.

    ``maps[k]`` goes from stage ``k`` to stage ``k+1``.  With a constant or
    truncated tail there is one map fewer than prefix stages; with a cyclic
    tail the last map enters the first tail stage ``len(prefix)``.
    """

    prefix: tuple[FgGroup, ...]
    maps: tuple[GroupMap, ...]
    tail: DirectTail

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "maps", tuple(self.maps))
        L = len(self.prefix)
        if isinstance(self.tail, CyclicPowers):
            need = L
        else:
            if L == 0:
                raise UnsupportedTower("a constant or truncated tower needs at least one stage")
            need = L - 1
        if len(self.maps) != need:
            raise UnsupportedTower(f"expected {need} connecting maps, got {len(self.maps)}")
        for k, f in enumerate(self.maps):
            if f.source != self.stage(k) or f.target != self.stage(k + 1):
                raise UnsupportedTower(f"map {k} does not connect stages {k} and {k + 1}")

    @property
    def L(self) -> int:
        return len(self.prefix)

    @property
    def kind(self) -> str:
        return self.tail.kind

    @property
    def tail_start(self) -> int:
        """First index whose outgoing map is governed by the tail."""
        return self.L if isinstance(self.tail, CyclicPowers) else self.L - 1

    def stage(self, k: int) -> FgGroup:
        if k < 0:
            raise IndexError(k)
        if k < self.L:
            return self.prefix[k]
        if isinstance(self.tail, CyclicPowers):
            return self.tail.stage(k)
        if isinstance(self.tail, Constant):
            return self.prefix[-1]
        raise IndexError(f"stage {k} lies past a truncated tower")

    def map(self, k: int) -> GroupMap:
        if k < len(self.maps):
            return self.maps[k]
        if isinstance(self.tail, CyclicPowers):
            return self.tail.map(k)
        if isinstance(self.tail, Constant):
            return GroupMap.identity(self.prefix[-1])
        raise IndexError(f"map {k} lies past a truncated tower")

    def composite(self, i: int, j: int) -> GroupMap:
        """The map from stage ``i`` to stage ``j >= i``."""
        f = GroupMap.identity(self.stage(i))
        for k in range(i, j):
            f = self.map(k) @ f
        return f

    def truncate(self, level: int) -> list[FgGroup]:
        if isinstance(self.tail, Truncated) and level > self.L:
            raise IndexError("truncation past a truncated tower")
        return [self.stage(k) for k in range(level)]

    @property
    def eventually_constant(self) -> bool:
        if isinstance(self.tail, Constant):
            return True
        return isinstance(self.tail, CyclicPowers) and self.tail.alpha == 0

    def to_dict(self) -> dict:
        tail: dict[str, Any] = {"kind": self.kind}
        if isinstance(self.tail, CyclicPowers):
            tail.update(p=self.tail.p, alpha=self.tail.alpha, beta=self.tail.beta)
        return {
            "prefix": [
                {"group": g.to_dict(), **({"map": self.maps[k].matrix} if k < len(self.maps) else {})}
                for k, g in enumerate(self.prefix)
            ],
            "tail": tail,
        }

    def __str__(self) -> str:
        if isinstance(self.tail, CyclicPowers):
            t = self.tail
            if t.kind == "prufer" and not self.L:
                return f"Z/{t.p}^∞"
            return f"colim Z/{t.p}^({t.alpha}k+{t.beta})"
        if isinstance(self.tail, Constant):
            return f"eventually {self.prefix[-1]}"
        return f"truncated tower of length {self.L}"


def prufer_tower(p: int) -> DirectTower:
    """``0 -> Z/p -> Z/p^2 -> ...`` with the canonical monomorphisms."""
    if not isinstance(p, int) or not isprime(p):
        raise UnsupportedTower(f"{p} is not prime")
    return DirectTower((), (), CyclicPowers(p, 1, 0))


def cyclic_tower(p: int, alpha: int, beta: int = 0) -> DirectTower:
    return DirectTower((), (), CyclicPowers(p, alpha, beta))


def constant_tower(g: FgGroup) -> DirectTower:
    return DirectTower((g,), (), Constant())


def eventually_constant_tower(stages: list[FgGroup], maps: list[GroupMap]) -> DirectTower:
    return DirectTower(tuple(stages), tuple(maps), Constant())


# ---------------------------------------------------------------------------
# inverse towers


@dataclass(frozen=True)
class InverseConstant:
    kind = "constant"


@dataclass(frozen=True, eq=False)
class HomOf:
    """Stages ``Hom(T_k, B)`` for a direct tower ``T`` and f.g. ``B``."""

    source: DirectTower
    target: FgGroup
    kind = "hom"


@dataclass(frozen=True, eq=False)
class HomIntoFamily:
    """Stages ``Hom(T_k, ⊕_j Z/p^f(j))``; infinite, handled symbolically."""

    source: DirectTower
    family: SumFamily
    kind = "hom_family"


@dataclass(frozen=True)
class Multiplication:
    """``Z <-p- Z <-p- ...``"""

    p: int
    kind = "multiplication"


@dataclass(frozen=True)
class InverseTruncated:
    kind = "truncated"


InverseTail = Union[InverseConstant, HomOf, HomIntoFamily, Multiplication, InverseTruncated]


@dataclass(frozen=True, eq=False)
class InverseTower:
    """``S_0 <- S_1 <- ...``; ``maps[k]`` goes from stage ``k+1`` to stage ``k``.

    For the generated tails (``HomOf``, ``HomIntoFamily``,
    ``Multiplication``) the prefix is empty and every stage comes from the
    rule.
    """

    prefix: tuple[FgGroup, ...] = ()
    maps: tuple[GroupMap, ...] = ()
    tail: InverseTail = field(default_factory=InverseConstant)

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "maps", tuple(self.maps))
        generated = isinstance(self.tail, (HomOf, HomIntoFamily, Multiplication))
        if generated and (self.prefix or self.maps):
            raise UnsupportedTower("generated towers take no explicit prefix")
        if not generated:
            if not self.prefix:
                raise UnsupportedTower("an explicit tower needs at least one stage")
            if len(self.maps) != len(self.prefix) - 1:
                raise UnsupportedTower("expected one map fewer than stages")
            for k, f in enumerate(self.maps):
                if f.source != self.prefix[k + 1] or f.target != self.prefix[k]:
                    raise UnsupportedTower(f"map {k} does not go from stage {k + 1} to stage {k}")

    @property
    def kind(self) -> str:
        return self.tail.kind

    @property
    def symbolic(self) -> bool:
        return isinstance(self.tail, HomIntoFamily)

    def stage(self, k: int) -> FgGroup:
        t = self.tail
        if isinstance(t, HomOf):
            return hom_group(t.source.stage(k), t.target).group
        if isinstance(t, HomIntoFamily):
            raise UnsupportedTower("stage is an infinite direct sum; use stage_truncated")
        if isinstance(t, Multiplication):
            return FgGroup.free(1)
        if k < len(self.prefix):
            return self.prefix[k]
        if isinstance(t, InverseConstant):
            return self.prefix[-1]
        raise IndexError(f"stage {k} lies past a truncated tower")

    def map(self, k: int) -> GroupMap:
        """Transition from stage ``k+1`` to stage ``k``."""
        t = self.tail
        if isinstance(t, HomOf):
            return induced(t.source.map(k), functor="hom", variable="contravariant", other=t.target)
        if isinstance(t, HomIntoFamily):
            raise UnsupportedTower("use map_truncated for symbolic stages")
        if isinstance(t, Multiplication):
            return GroupMap.multiplication(FgGroup.free(1), t.p)
        if k < len(self.maps):
            return self.maps[k]
        if isinstance(t, InverseConstant):
            return GroupMap.identity(self.prefix[-1])
        raise IndexError(f"map {k} lies past a truncated tower")

    def stage_truncated(self, k: int, J: int) -> FgGroup:
        """Stage ``k`` with the target family cut to its first ``J`` summands."""
        t = self.tail
        if not isinstance(t, HomIntoFamily):
            return self.stage(k)
        return hom_group(t.source.stage(k), t.family.truncation(J)).group

    def map_truncated(self, k: int, J: int) -> GroupMap:
        t = self.tail
        if not isinstance(t, HomIntoFamily):
            return self.map(k)
        return induced(t.source.map(k), functor="hom", variable="contravariant", other=t.family.truncation(J))

    def image_in(self, k: int, j: int, J: int = 4) -> Subgroup:
        """Image of stage ``j >= k`` in stage ``k`` (families cut at ``J``)."""
        f = GroupMap.identity(self.stage_truncated(j, J))
        for i in range(j - 1, k - 1, -1):
            f = self.map_truncated(i, J) @ f
        return subgroup_generated(f.target, f.column_elements())

    def __str__(self) -> str:
        t = self.tail
        if isinstance(t, HomOf):
            return f"Hom({t.source}, {t.target})"
        if isinstance(t, HomIntoFamily):
            return f"Hom({t.source}, {t.family})"
        if isinstance(t, Multiplication):
            return f"Z <-{t.p}- Z <-{t.p}- ..."
        return f"{t.kind} tower of length {len(self.prefix)}"


def hom_tower(T: DirectTower, B: Union[FgGroup, SumFamily]) -> InverseTower:
    if isinstance(T.tail, Truncated):
        raise UnsupportedTower("Hom tower of a truncated tower is not determined")
    if isinstance(B, SumFamily):
        return InverseTower(tail=HomIntoFamily(T, B))
    if isinstance(B, FgGroup):
        return InverseTower(tail=HomOf(T, B))
    raise UnsupportedTower(f"unsupported coefficient group {B!r}")


def multiplication_tower(p: int) -> InverseTower:
    if not isprime(p):
        raise UnsupportedTower(f"{p} is not prime")
    return InverseTower(tail=Multiplication(p))


# ---------------------------------------------------------------------------
# lim and lim^1

STATUSES = ("ZeroMittagLeffler", "ZeroFiniteGroups", "NonzeroWitness", "Unknown")


@dataclass(frozen=True)
class Lim1Report:
    status: str
    lim_description: str | None
    lim1_description: str | None
    truncation: int
    level: int | None = None
    witness: Any = field(default=None, compare=False)
    tower: str = ""

    @property
    def is_zero(self) -> bool:
        return self.status in ("ZeroMittagLeffler", "ZeroFiniteGroups")

    @property
    def is_unknown(self) -> bool:
        return self.status == "Unknown"

    def to_dict(self) -> dict:
        w = self.witness
        if w is not None and hasattr(w, "to_dict"):
            w = w.to_dict()
        return {
            "status": self.status,
            "level": self.level,
            "lim": self.lim_description,
            "lim1": self.lim1_description,
            "truncation": self.truncation,
            "tower": self.tower,
            "witness": w,
        }


def _source_tail(T: DirectTower) -> tuple[int, int, int] | None:
    """``(p, alpha, tail_start)`` for a tower whose colimit is ``Z/p^∞``."""
    t = T.tail
    if isinstance(t, CyclicPowers) and t.alpha > 0:
        return t.p, t.alpha, T.tail_start
    return None


def _all_stages_finite(tower: InverseTower) -> bool:
    t = tower.tail
    if isinstance(t, HomOf):
        # Hom(T_k, B) is finite whenever T_k is
        if isinstance(t.source.tail, CyclicPowers):
            return all(g.is_finite for g in t.source.prefix) or t.target.free_rank == 0
        return all(tower.stage(k).is_finite for k in range(t.source.L))
    if isinstance(t, HomIntoFamily):
        src = _source_tail(t.source)
        if src is None or src[0] == t.family.p:
            return not t.family.unbounded and t.family.beta == 0
        return all(_coprime_stage(t, k) for k in range(t.source.L))
    if isinstance(t, Multiplication):
        return False
    if isinstance(t, InverseConstant):
        return all(g.is_finite for g in tower.prefix)
    return False


def _coprime_stage(t: HomIntoFamily, k: int) -> bool:
    g = t.source.stage(k)
    return g.free_rank == 0 and math.gcd(g.torsion_order, t.family.p) == 1


def _ml_level_finite(tower: InverseTower, truncation: int) -> int | None:
    """Smallest ``L`` with images stabilized from ``L`` steps on, searched on the prefix."""
    for L in range(truncation + 1):
        if verify_mittag_leffler(tower, L, depth=3, stages=min(truncation, 6)):
            return L
    return None


def lim_and_lim1(tower: InverseTower, *, truncation: int = DEFAULT_TRUNCATION,
                 precision: int = DEFAULT_PRECISION) -> Lim1Report:
    t = tower.tail
    desc = str(tower)

    if isinstance(t, InverseTruncated):
        return Lim1Report("Unknown", None, None, truncation, level=len(tower.prefix), tower=desc)

    if isinstance(t, Multiplication):
        # lim = ∩ p^k Z = 0; lim^1 = Z_p / Z
        zp = completion_triple(FgGroup.free(1), t.p).completion
        x = PadicInt(t.p, sum(t.p**k for k in range(1, precision, 2)), precision)
        witness = {"padic": list(x.digits), "rational": f"{t.p}/(1-{t.p}^2)", "integer": False}
        return Lim1Report("NonzeroWitness", "0", f"{zp} / Z", truncation, witness=witness, tower=desc)

    if isinstance(t, InverseConstant):
        if all(g.is_finite for g in tower.prefix):
            return Lim1Report("ZeroFiniteGroups", None, "0", truncation, tower=desc)
        return Lim1Report("ZeroMittagLeffler", None, "0", truncation, level=len(tower.prefix) - 1, tower=desc)

    if isinstance(t, HomOf):
        T, B = t.source, t.target
        if T.eventually_constant:
            lim = str(hom_group(T.stage(T.tail_start), B).group)
            status = "ZeroFiniteGroups" if _all_stages_finite(tower) else "ZeroMittagLeffler"
            level = None if status == "ZeroFiniteGroups" else T.tail_start
            return Lim1Report(status, lim, "0", truncation, level=level, tower=desc)
        # colim is Z/p^∞; Hom(Z/p^∞, B) = 0 for f.g. B
        if _all_stages_finite(tower):
            return Lim1Report("ZeroFiniteGroups", "0", "0", truncation, tower=desc)
        level = _ml_level_finite(tower, truncation)
        if level is None:
            return Lim1Report("Unknown", "0", None, truncation, tower=desc)
        return Lim1Report("ZeroMittagLeffler", "0", "0", truncation, level=level, tower=desc)

    if isinstance(t, HomIntoFamily):
        T, B = t.source, t.family
        if T.eventually_constant:
            g = T.stage(T.tail_start)
            return Lim1Report("ZeroMittagLeffler", f"⊕_j Hom({g}, Z/{B.p}^f(j))", "0", truncation,
                              level=T.tail_start, tower=desc)
        src = _source_tail(T)
        if src is None:
            return Lim1Report("Unknown", None, None, truncation, tower=desc)
        p, alpha, start = src
        if _all_stages_finite(tower):
            return Lim1Report("ZeroFiniteGroups", "0", "0", truncation, tower=desc)
        if p != B.p:
            # tail stages Hom(Z/p^e, ⊕ Z/q^f) vanish
            return Lim1Report("ZeroMittagLeffler", "0", "0", truncation, level=start, tower=desc)
        if not B.unbounded:
            # transitions are x p^alpha on a group of exponent p^beta
            level = start + -(-B.beta // alpha)
            return Lim1Report("ZeroMittagLeffler", "0", "0", truncation, level=level, tower=desc)
        w = pinf_witness(B, min(10, precision - 2), precision=precision)
        lim1 = f"∏_k Z_{p} / {{b : v(b_k) -> ∞}}"
        return Lim1Report("NonzeroWitness", "0", lim1, truncation, witness=w, tower=desc)

    return Lim1Report("Unknown", None, None, truncation, tower=desc)  # pragma: no cover


def verify_mittag_leffler(tower: InverseTower, L: int, *, depth: int = 3, stages: int | None = None,
                          J: int = 4) -> bool:
    """Check that images into stage ``k`` stop shrinking ``L`` steps up.

    Stages ``0 .. stages-1`` are tested (default: prefix plus ``depth``)
    against ``depth`` further levels.  Family targets are cut to ``J``
    summands, which commutes with every transition.
    """
    if stages is None:
        stages = len(tower.prefix) + depth
    if isinstance(tower.tail, InverseTruncated):
        stages = min(stages, max(len(tower.prefix) - L - depth, 0))
    for k in range(stages):
        ref = tower.image_in(k, k + L, J)
        for d in range(1, depth + 1):
            if not tower.image_in(k, k + L + d, J).same_as(ref):
                return False
    return True


def recheck_report(report: Lim1Report, tower: InverseTower, depth: int = 3) -> bool:
    """Re-verify the certificate carried by a report."""
    if report.status == "ZeroMittagLeffler":
        return verify_mittag_leffler(tower, report.level, depth=depth)
    if report.status == "ZeroFiniteGroups":
        if isinstance(tower.tail, HomIntoFamily):
            return all(tower.stage_truncated(k, 4).is_finite for k in range(depth + 1))
        return all(tower.stage(k).is_finite for k in range(len(tower.prefix) + depth))
    if report.status == "NonzeroWitness":
        w = report.witness
        if isinstance(w, dict):
            x = PadicInt.from_digits(tower.tail.p, w["padic"])
            p = tower.tail.p
            # p/(1-p^2) has the alternating digit pattern; it is not an integer
            return x == PadicInt(p, p * pow(1 - p * p, -1, p**x.N), x.N)
        return w.nonzero and not w.x.is_zero() and all(w.scaled_nonzero.values()) and w.division_ok
    return False


def pext_ind(T: DirectTower, B: Union[FgGroup, SumFamily], *, truncation: int = DEFAULT_TRUNCATION,
             precision: int = DEFAULT_PRECISION) -> Lim1Report:
    """``PExt(colim T, B)`` as ``lim^1`` of the Hom tower."""
    if isinstance(T.tail, Truncated):
        return Lim1Report("Unknown", None, None, truncation, level=T.L, tower=f"Hom({T}, {B})")
    return lim_and_lim1(hom_tower(T, B), truncation=truncation, precision=precision)
