"""Finitely generated abelian groups in invariant-factor form.

A group is ``Z/d_1 + ... + Z/d_t + Z^r`` with ``d_i | d_{i+1}``.  Coordinates
list the torsion generators first and the free generators last; torsion
coordinates are kept reduced into ``[0, d_i)``.

Everything else (kernels, images, cokernels, subgroups) is computed by
reducing a presentation with :func:`phantomlab.snf.smith`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import snf
from .snf import Matrix


class IllDefinedMap(ValueError):
    """A matrix does not describe a homomorphism between the given groups."""


class NotExact(ValueError):
    """A pair of maps does not form a short exact sequence."""


@dataclass(frozen=True)
class FgGroup:
    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        ds = self.invariant_factors
        for i, d in enumerate(ds):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i + 1 < len(ds) and ds[i + 1] % d:
                raise ValueError(f"invariant factors {ds} do not form a divisibility chain")

    # -- construction helpers -------------------------------------------------
    @classmethod
    def cyclic(cls, n: int) -> FgGroup:
        """``Z/n``; ``n == 0`` gives ``Z`` and ``n == 1`` the trivial group."""
        if n == 0:
            return cls(1, ())
        n = abs(n)
        return cls(0, () if n == 1 else (n,))

    @classmethod
    def free(cls, r: int) -> FgGroup:
        return cls(r, ())

    @classmethod
    def trivial(cls) -> FgGroup:
        return cls(0, ())

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> FgGroup:
        """Canonical form of a direct sum of cyclic groups (0 meaning ``Z``)."""
        return canonicalize_orders(list(orders)).group

    # -- structure ------------------------------------------------------------
    @property
    def torsion_rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for free generators."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` for infinite groups."""
        return self.torsion_order if self.is_finite else None

    @property
    def exponent(self) -> int:
        """Exponent of the torsion subgroup (1 if torsion-free)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(c % d if d else c for c, d in zip(coords, self.orders))

    def __call__(self, *coords: int) -> Element:
        return Element(self, self.reduce(coords))

    def element(self, coords: Sequence[int]) -> Element:
        return Element(self, self.reduce(coords))

    @property
    def zero(self) -> Element:
        return Element(self, (0,) * self.ngens)

    def gens(self) -> list[Element]:
        out = []
        for i in range(self.ngens):
            c = [0] * self.ngens
            c[i] = 1
            out.append(self.element(c))
        return out

    def elements(self) -> Iterator[Element]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield Element(self, tuple(coords))

    def relation_columns(self) -> Matrix:
        """Columns ``d_i e_i`` generating the relation lattice in ``Z^ngens``."""
        n = self.ngens
        cols = []
        for i, d in enumerate(self.invariant_factors):
            c = [0] * n
            c[i] = d
            cols.append(c)
        return snf.from_columns(cols, n)

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Element:
    parent: FgGroup
    coords: tuple[int, ...]

    def _check(self, other: Element) -> None:
        if other.parent != self.parent:
            raise ValueError(f"elements of different groups: {self.parent} vs {other.parent}")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: Element) -> Element:
        self._check(other)
        return self.parent.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> Element:
        return self.parent.element([-a for a in self.coords])

    def __rmul__(self, n: int) -> Element:
        return self.parent.element([n * a for a in self.coords])

    def __mul__(self, n: int) -> Element:
        return self.__rmul__(n)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def order(self) -> int:
        """Additive order; 0 for elements of infinite order."""
        ords = self.parent.orders
        out = 1
        for c, d in zip(self.coords, ords):
            if c == 0:
                continue
            if d == 0:
                return 0
            out = math.lcm(out, d // math.gcd(c, d))
        return out

    def __repr__(self) -> str:
        return f"Element({self.parent}, {list(self.coords)})"


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A homomorphism given on canonical generators.

    ``matrix`` has ``target.ngens`` rows and ``source.ngens`` columns; column
    ``j`` holds the image of generator ``j``.
    """

    source: FgGroup
    target: FgGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source: FgGroup, target: FgGroup, matrix: Sequence[Sequence[int]]):
        rows = [list(r) for r in matrix]
        if len(rows) != target.ngens:
            raise IllDefinedMap(f"matrix has {len(rows)} rows, target {target} needs {target.ngens}")
        for r in rows:
            if len(r) != source.ngens:
                raise IllDefinedMap(f"matrix row has {len(r)} entries, source {source} needs {source.ngens}")
        tords = target.orders
        red = tuple(tuple(x % d if d else x for x in r) for r, d in zip(rows, tords))
        for j, dj in enumerate(source.orders):
            if dj == 0:
                continue
            for i, ei in enumerate(tords):
                x = red[i][j] * dj
                if (x % ei if ei else x) != 0:
                    raise IllDefinedMap(
                        f"generator {j} of order {dj} is sent to an element of order not dividing {dj}"
                    )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", red)

    @classmethod
    def identity(cls, g: FgGroup) -> GroupMap:
        return cls(g, g, snf.identity(g.ngens))

    @classmethod
    def zero(cls, source: FgGroup, target: FgGroup) -> GroupMap:
        return cls(source, target, snf.zeros(target.ngens, source.ngens))

    @classmethod
    def from_images(cls, source: FgGroup, target: FgGroup, images: Sequence[Element | Sequence[int]]) -> GroupMap:
        cols = [list(x.coords) if isinstance(x, Element) else list(x) for x in images]
        return cls(source, target, snf.from_columns(cols, target.ngens))

    @classmethod
    def multiplication(cls, g: FgGroup, n: int) -> GroupMap:
        m = snf.identity(g.ngens)
        for i in range(g.ngens):
            m[i][i] = n
        return cls(g, g, m)

    @property
    def rows(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.matrix]

    def __call__(self, x: Element | Sequence[int]) -> Element:
        if isinstance(x, Element):
            if x.parent != self.source:
                raise ValueError(f"element of {x.parent} fed to map with source {self.source}")
            x = x.coords
        return self.target.element(snf.matvec(self.rows, list(x)) if self.target.ngens else [])

    def __matmul__(self, other: GroupMap) -> GroupMap:
        """Composition ``self o other``."""
        if other.target != self.source:
            raise ValueError(f"cannot compose: {other.target} != {self.source}")
        m = snf.matmul(self.rows, other.rows, cols=other.source.ngens)
        return GroupMap(other.source, self.target, m)

    def __add__(self, other: GroupMap) -> GroupMap:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add maps with different source/target")
        m = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return GroupMap(self.source, self.target, m)

    def __neg__(self) -> GroupMap:
        return GroupMap(self.source, self.target, [[-a for a in r] for r in self.matrix])

    def __rmul__(self, n: int) -> GroupMap:
        return GroupMap(self.source, self.target, [[n * a for a in r] for r in self.matrix])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupMap):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def column_elements(self) -> list[Element]:
        return [self.target.element(self.column(j)) for j in range(self.source.ngens)]

    def lift(self, y: Element | Sequence[int]) -> Element | None:
        """Some ``x`` with ``self(x) == y``, or ``None`` if ``y`` is not in the image.

        The choice is deterministic (first solution of the integer system).
        """
        if isinstance(y, Element):
            y = y.coords
        x = snf.solve_with(self._lift_form, list(y))
        if x is None:
            return None
        return self.source.element(x[: self.source.ngens])

    @cached_property
    def _lift_form(self) -> snf.SmithForm:
        # SNF of [F | relations of the target], shared by every lift
        rel = self.target.relation_columns()
        a = snf.hstack([self.rows, rel], self.target.ngens)
        return snf.smith(a, cols=self.source.ngens + self.target.torsion_rank)

    def _kernel_columns(self) -> list[list[int]]:
        pre = relation_lattice(self.rows, self.target, self.source.ngens)
        return snf.columns(pre) if pre else []

    def kernel(self) -> Subgroup:
        cols = self._kernel_columns()
        return subgroup_generated(self.source, cols) if cols else zero_subgroup(self.source)

    def image(self) -> Subgroup:
        return subgroup_generated(self.target, [self.column(j) for j in range(self.source.ngens)])

    def is_injective(self) -> bool:
        return all(self.source.element(c).is_zero() for c in self._kernel_columns())

    def is_surjective(self) -> bool:
        return cokernel(self).group.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def to_dict(self) -> dict:
        return {"source": self.source.to_dict(), "target": self.target.to_dict(),
                "matrix": [list(r) for r in self.matrix]}

    def __repr__(self) -> str:
        return f"GroupMap({self.source} -> {self.target}, {[list(r) for r in self.matrix]})"


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    """Result of reducing ``Z^n / L`` to canonical form.

    ``to_canonical`` (``group.ngens x n``) sends old coordinates to canonical
    ones; ``section`` (``n x group.ngens``) lifts canonical generators back.
    ``to_canonical @ section`` is the identity.
    """

    group: FgGroup
    to_canonical: Matrix
    section: Matrix
    n: int

    def project(self, x: Sequence[int]) -> Element:
        return self.group.element(snf.matvec(self.to_canonical, list(x)) if self.group.ngens else [])

    def lift(self, e: Element | Sequence[int]) -> list[int]:
        c = list(e.coords) if isinstance(e, Element) else list(e)
        return snf.matvec(self.section, c) if self.n else []


def _diagonal_orders(rel: Matrix, n: int) -> list[int] | None:
    """Per-generator orders if every relation touches a single generator."""
    orders = [0] * n
    for j in range(len(rel[0]) if rel else 0):
        nz = [(i, rel[i][j]) for i in range(n) if rel[i][j]]
        if len(nz) > 1:
            return None
        if nz:
            i, x = nz[0]
            orders[i] = math.gcd(orders[i], x)
    return orders


def canonicalize_orders(orders: list[int]) -> Presentation:
    """Canonical form of ``Z/o_1 + ... + Z/o_n`` (``o_i == 0`` meaning ``Z``)."""
    n = len(orders)
    orders = [abs(o) for o in orders]
    tors = sorted((o, i) for i, o in enumerate(orders) if o > 1)
    free = [i for i, o in enumerate(orders) if o == 0]
    vals = [o for o, _ in tors]
    if all(vals[k + 1] % vals[k] == 0 for k in range(len(vals) - 1)):
        perm = [i for _, i in tors] + free
        P = snf.zeros(len(perm), n)
        Q = snf.zeros(n, len(perm))
        for new, old in enumerate(perm):
            P[new][old] = 1
            Q[old][new] = 1
        return Presentation(FgGroup(len(free), tuple(vals)), P, Q, n)
    cols = []
    for i, o in enumerate(orders):
        if o:
            c = [0] * n
            c[i] = o
            cols.append(c)
    return _cokernel_general(snf.from_columns(cols, n), n)


def _cokernel_general(rel: Matrix, n: int) -> Presentation:
    m = len(rel[0]) if rel and rel[0] else 0
    if m == 0:
        return Presentation(FgGroup(n, ()), snf.identity(n), snf.identity(n), n)
    sf = snf.smith(rel, cols=m)
    diag = sf.diagonal
    keep_t = [i for i, d in enumerate(diag) if d > 1]
    keep = keep_t + list(range(len(diag), n))
    P = [list(sf.U[i]) for i in keep]
    Q = [[sf.U_inv[r][i] for i in keep] for r in range(n)]
    g = FgGroup(n - len(diag), tuple(diag[i] for i in keep_t))
    # reduce the rows of P for torsion coordinates; keeps numbers small
    for k, d in enumerate(g.invariant_factors):
        P[k] = [x % d for x in P[k]]
    return Presentation(g, P, Q, n)


def cokernel_of_columns(rel: Matrix, n: int) -> Presentation:
    """Canonical form of ``Z^n`` modulo the span of the columns of ``rel``."""
    if rel and rel[0]:
        d = _diagonal_orders(rel, n)
        if d is not None:
            return canonicalize_orders(d)
    else:
        return canonicalize_orders([0] * n)
    return _cokernel_general(rel, n)


def canonicalize(relations: Sequence[Sequence[int]], generators: int | None = None) -> FgGroup:
    """Canonical form of the group with the given relation rows.

    Each relation is a row of integer coefficients on ``generators``
    generators.
    """
    return presentation(relations, generators).group


def presentation(relations: Sequence[Sequence[int]], generators: int | None = None) -> Presentation:
    rows = [list(r) for r in relations]
    if generators is None:
        if not rows:
            raise ValueError("number of generators is required when there are no relations")
        generators = len(rows[0])
    for r in rows:
        if len(r) != generators:
            raise ValueError(f"relation {r} does not have {generators} entries")
    cols = snf.transpose(rows, generators) if rows else [[] for _ in range(generators)]
    return cokernel_of_columns(cols, generators)


# ---------------------------------------------------------------------------
# subgroups, kernels, images, cokernels


def relation_lattice(gens: Matrix, ambient: FgGroup, k: int) -> Matrix:
    """Columns spanning ``{c in Z^k : gens @ c == 0 in ambient}``."""
    n = ambient.ngens
    if k == 0:
        return []
    if n == 0:
        return snf.identity(k)
    rel = ambient.relation_columns()
    t = ambient.torsion_rank
    a = snf.hstack([gens, [[-x for x in r] for r in rel]], n)
    sf = snf.smith(a, cols=k + t)
    basis = sf.kernel_basis()
    return snf.from_columns([v[:k] for v in basis], k)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``ambient`` with canonical form ``group`` and inclusion ``incl``."""

    ambient: FgGroup
    group: FgGroup
    incl: GroupMap

    def contains(self, x: Element) -> bool:
        return self.incl.lift(x) is not None

    def coords(self, x: Element) -> Element:
        """Coordinates of ``x`` in ``group``; raises if ``x`` is not a member."""
        c = self.incl.lift(x)
        if c is None:
            raise ValueError(f"{x} is not in the subgroup")
        return c

    @property
    def order(self) -> int | None:
        return self.group.order

    def __le__(self, other: Subgroup) -> bool:
        return all(other.contains(self.incl(g)) for g in self.group.gens())

    def same_as(self, other: Subgroup) -> bool:
        return self <= other and other <= self


def subgroup_generated(ambient: FgGroup, gens: Sequence[Element | Sequence[int]]) -> Subgroup:
    cols = [list(g.coords) if isinstance(g, Element) else list(g) for g in gens]
    k = len(cols)
    n = ambient.ngens
    S = snf.from_columns(cols, n)
    rel = relation_lattice(S, ambient, k)
    pres = cokernel_of_columns(rel, k) if k else canonicalize_orders([])
    incl_m = snf.matmul(S, pres.section, cols=pres.group.ngens) if k else snf.zeros(n, 0)
    incl = GroupMap(pres.group, ambient, incl_m)
    return Subgroup(ambient, pres.group, incl)


def zero_subgroup(ambient: FgGroup) -> Subgroup:
    return Subgroup(ambient, FgGroup(), GroupMap.zero(FgGroup(), ambient))


@dataclass(frozen=True)
class Quotient:
    group: FgGroup
    proj: GroupMap
    section: Matrix  # canonical generators of ``group`` lifted into the source coordinates

    def lift(self, e: Element) -> Element:
        src = self.proj.source
        return src.element(snf.matvec(self.section, list(e.coords)) if src.ngens else [])


def quotient(ambient: FgGroup, gens: Sequence[Element | Sequence[int]]) -> Quotient:
    n = ambient.ngens
    cols = [list(g.coords) if isinstance(g, Element) else list(g) for g in gens]
    rel = snf.hstack([ambient.relation_columns(), snf.from_columns(cols, n)], n)
    pres = cokernel_of_columns(rel, n)
    proj = GroupMap(ambient, pres.group, pres.to_canonical if pres.group.ngens else [])
    return Quotient(pres.group, proj, pres.section)


def cokernel(f: GroupMap) -> Quotient:
    return quotient(f.target, [f.column(j) for j in range(f.source.ngens)])


@dataclass(frozen=True)
class Factorization:
    kernel: Subgroup
    image: Subgroup
    cokernel: Quotient


def map_factorization(f: GroupMap) -> Factorization:
    """Kernel, image and cokernel of ``f``, each in canonical form."""
    return Factorization(f.kernel(), f.image(), cokernel(f))


@dataclass(frozen=True)
class DirectSum:
    group: FgGroup
    inclusions: tuple[GroupMap, ...]
    projections: tuple[GroupMap, ...]


def direct_sum(*groups: FgGroup) -> DirectSum:
    orders: list[int] = []
    for g in groups:
        orders.extend(g.orders)
    pres = canonicalize_orders(orders)
    G = pres.group
    incs, projs = [], []
    off = 0
    for g in groups:
        cols = list(range(off, off + g.ngens))
        incs.append(GroupMap(g, G, [[pres.to_canonical[i][c] for c in cols] for i in range(G.ngens)]))
        projs.append(GroupMap(G, g, [list(pres.section[c]) for c in cols]))
        off += g.ngens
    return DirectSum(G, tuple(incs), tuple(projs))


@dataclass(frozen=True)
class TorsionAndQuotient:
    n: int
    torsion: Subgroup  # nA
    quotient: Quotient  # A/n


def n_torsion_and_quotient(a: FgGroup, n: int) -> TorsionAndQuotient:
    if n < 1:
        raise ValueError("n must be positive")
    mult = GroupMap.multiplication(a, n)
    fac = map_factorization(mult)
    return TorsionAndQuotient(n, fac.kernel, fac.cokernel)


def image_of_multiplication(a: FgGroup, n: int) -> Subgroup:
    return map_factorization(GroupMap.multiplication(a, n)).image


@dataclass(frozen=True, eq=False)
class ShortExact:
    """``0 -> B --incl--> C --proj--> A -> 0``, verified on construction."""

    incl: GroupMap
    proj: GroupMap

    def __post_init__(self) -> None:
        i, q = self.incl, self.proj
        if i.target != q.source:
            raise NotExact("incl target and proj source differ")
        if not i.is_injective():
            raise NotExact("inclusion is not injective")
        if not q.is_surjective():
            raise NotExact("projection is not surjective")
        if not (q @ i).is_zero():
            raise NotExact("proj o incl is not zero")
        if i.target.is_finite:
            # im(incl) <= ker(proj) and both have order |C| / |A| exactly when the orders multiply
            if i.target.order != i.source.order * q.target.order:
                raise NotExact("kernel of proj is larger than the image of incl")
            return
        for c in q._kernel_columns():
            if i.lift(c) is None:
                raise NotExact("kernel of proj is larger than the image of incl")

    @property
    def sub(self) -> FgGroup:
        return self.incl.source

    @property
    def middle(self) -> FgGroup:
        return self.incl.target

    @property
    def quot(self) -> FgGroup:
        return self.proj.target

    def to_dict(self) -> dict:
        return {"incl": self.incl.to_dict(), "proj": self.proj.to_dict()}


def split_sequence(a: FgGroup, b: FgGroup) -> ShortExact:
    """The split extension ``B -> B + A -> A``."""
    ds = direct_sum(b, a)
    return ShortExact(ds.inclusions[0], ds.projections[1])
