"""Purity of extensions of finitely generated abelian groups.

A sequence ``B -> C -> A`` is pure when ``B/n -> C/n`` is monic for every
``n``.  Four equivalent tests are implemented independently:

``torsion``
    ``nC -> nA`` is onto for every ``n``.
``restriction``
    the class restricts to zero along maps from finitely generated groups.
``ulm``
    the class lies in ``n Ext(A, B)`` for every ``n``.
``finite_pushout``
    the class pushes forward to zero along every map into a finite group.

For finitely generated ``A`` all four reduce to "the class is zero", which
the tests exploit as an oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Literal, Union

from sympy import factorint

from .fgab import FgGroup, GroupMap, ShortExact, n_torsion_and_quotient
from .homalg import (
    ExtClass,
    ext_class,
    ext_group,
    hom_group,
    in_ulm_subgroup,
    pushforward,
    realize_extension,
    restrict,
)

Method = Literal["torsion", "restriction", "ulm", "finite_pushout"]
METHODS: tuple[Method, ...] = ("torsion", "restriction", "ulm", "finite_pushout")


class PurityConsistencyError(AssertionError):
    """The purity tests disagreed, which means there is a bug."""


class NotFinitelyGenerated(TypeError):
    pass


@dataclass(frozen=True)
class PurityVerdict:
    pure: bool
    method: str
    witness: dict[str, Any] | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {"pure": self.pure, "method": self.method, "witness": self.witness}


def _divisors(n: int) -> list[int]:
    return [d for d in range(2, n + 1) if n % d == 0]


def _as_pair(x: Union[ShortExact, ExtClass]) -> tuple[ShortExact, ExtClass]:
    if isinstance(x, ShortExact):
        return x, ext_class(x)
    if isinstance(x, ExtClass):
        return realize_extension(x), x
    raise NotFinitelyGenerated(
        f"purity checks here need finitely generated data, got {type(x).__name__}; "
        "use phantomlab.towers.pext_ind for colimits"
    )


def _check_torsion(s: ShortExact) -> PurityVerdict:
    A = s.quot
    for n in _divisors(A.exponent):
        tc = n_torsion_and_quotient(s.middle, n).torsion
        ta = n_torsion_and_quotient(A, n).torsion
        img = [ta.coords(s.proj(tc.incl(g))) for g in tc.group.gens()]
        onto = GroupMap.from_images(tc.group, ta.group, img)
        for g in ta.group.gens():
            if onto.lift(g) is None:
                a = ta.incl(g)
                return PurityVerdict(False, "torsion", {"n": n, "element": list(a.coords)})
    return PurityVerdict(True, "torsion")


def _check_restriction(u: ExtClass, probes: int, seed: int) -> PurityVerdict:
    A = u.ext.source
    if not restrict(u, GroupMap.identity(A)).is_zero():
        return PurityVerdict(False, "restriction", {"probe": "identity", "source": A.to_dict()})
    rng = random.Random(seed)
    for _ in range(probes if A.torsion_rank else 0):
        n = rng.choice(_divisors(A.exponent))
        na = n_torsion_and_quotient(A, n).torsion
        coords = [rng.randrange(d) for d in na.group.invariant_factors]
        a = na.incl(na.group.element(coords))
        f = GroupMap.from_images(FgGroup.cyclic(n), A, [a])
        if not restrict(u, f).is_zero():
            return PurityVerdict(False, "restriction", {"probe": "cyclic", "n": n, "element": list(a.coords)})
    return PurityVerdict(True, "restriction")


def _check_ulm(u: ExtClass) -> PurityVerdict:
    ok, n = in_ulm_subgroup(u.value)
    if ok:
        return PurityVerdict(True, "ulm")
    return PurityVerdict(False, "ulm", {"n": n, "value": list(u.value.coords)})


def _check_pushout(u: ExtClass) -> PurityVerdict:
    B = u.ext.target
    # f -> f_* u is additive, so generators of Hom(B, Z/p^k) decide every map
    for p, e in sorted(factorint(u.ext.group.exponent).items()):
        for k in range(1, e + 1):
            T = FgGroup.cyclic(p**k)
            for f in hom_group(B, T).basis:
                if not pushforward(u, f).is_zero():
                    return PurityVerdict(
                        False, "finite_pushout", {"target": p**k, "map": [list(r) for r in f.matrix]}
                    )
    return PurityVerdict(True, "finite_pushout")


def pure_check(x: Union[ShortExact, ExtClass], method: Method, *, probes: int = 16, seed: int = 0) -> PurityVerdict:
    s, u = _as_pair(x)
    if method == "torsion":
        return _check_torsion(s)
    if method == "restriction":
        return _check_restriction(u, probes, seed)
    if method == "ulm":
        return _check_ulm(u)
    if method in ("finite_pushout", "pushout"):
        return _check_pushout(u)
    raise ValueError(f"unknown method {method!r}")


def verify_witness(x: Union[ShortExact, ExtClass], verdict: PurityVerdict) -> bool:
    """Re-check the witness attached to an impure verdict from scratch."""
    if verdict.pure:
        return True
    s, u = _as_pair(x)
    w = verdict.witness or {}
    if verdict.method == "torsion":
        n, a = w["n"], s.quot.element(w["element"])
        if not (n * a).is_zero():
            return False
        # a is in nA; it is hit from nC iff some lift c of a has n c = 0,
        # i.e. iff n * lift lands in n * (image of B)
        c = s.proj.lift(a)
        b = s.incl.lift(n * c)
        return GroupMap.multiplication(s.sub, n).lift(b) is None
    if verdict.method == "restriction":
        if w["probe"] == "identity":
            return not u.is_zero()
        f = GroupMap.from_images(FgGroup.cyclic(w["n"]), s.quot, [s.quot.element(w["element"])])
        return not restrict(u, f).is_zero()
    if verdict.method == "ulm":
        return GroupMap.multiplication(u.ext.group, w["n"]).lift(u.value) is None
    if verdict.method == "finite_pushout":
        f = GroupMap(u.ext.target, FgGroup.cyclic(w["target"]), w["map"])
        return not pushforward(u, f).is_zero()
    return False


def is_pure(x: Union[ShortExact, ExtClass], *, seed: int = 0) -> PurityVerdict:
    """Run all four tests; they must agree.

    An impure verdict carries the ulm witness, the cheapest to re-check; a
    pure verdict has ``method == "all"``.
    """
    s, u = _as_pair(x)
    verdicts = {m: pure_check(u if m != "torsion" else s, m, seed=seed) for m in METHODS}
    values = {v.pure for v in verdicts.values()}
    if len(values) != 1:
        raise PurityConsistencyError({m: v.pure for m, v in verdicts.items()})
    if values == {True}:
        return PurityVerdict(True, "all")
    return verdicts["ulm"]


# ---------------------------------------------------------------------------
# random sequences


def random_group(rng: random.Random, max_rank: int = 3, max_factor: int = 16, max_torsion: int = 2) -> FgGroup:
    r = rng.randint(0, max_rank)
    factors: list[int] = []
    for _ in range(rng.randint(0, max_torsion)):
        lo = factors[-1] if factors else 1
        choices = [d for d in range(max(2, lo), max_factor + 1) if d % lo == 0]
        if not choices:
            break
        factors.append(rng.choice(choices))
    return FgGroup(r, tuple(factors))


def random_ses(rng: random.Random, max_rank: int = 3, max_factor: int = 16, split_bias: float = 0.25) -> ShortExact:
    """Random extension of random groups, realized from a random Ext class."""
    A = random_group(rng, max_rank, max_factor)
    B = random_group(rng, max_rank, max_factor)
    E = ext_group(A, B)
    if rng.random() < split_bias:
        u = E.zero
    else:
        u = E.element([rng.randrange(d) for d in E.group.invariant_factors])
    return realize_extension(u)
