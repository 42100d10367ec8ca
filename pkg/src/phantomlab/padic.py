"""Truncated p-adic integers and Ext-p-completions of direct sums of cyclic groups.

For ``B = ⊕_k Z/p^{f(k)}`` with ``f(k) = αk + β`` the presentation
``⊕Z --p^{f(k)}--> ⊕Z -> B`` identifies, inside ``∏_k Z_p``,

* ``S1 = {a : v(a_k) -> ∞}``                 (``Ext(Z/p^∞, ⊕Z)``),
* ``S2 = {a : v(a_k) >= f(k) for all k}``,
* ``S3 = {a : v(a_k) - f(k) >= 0 and -> ∞}``,

with ``B~ = S1/S3``, ``B^ = S1/(S1 ∩ S2)`` and ``p^∞B~ = (S1 ∩ S2)/S3``.
Sequences are given by an explicit prefix of truncated p-adic integers and
a symbolic tail ``a_k = u p^{αk+β}``, so every membership question above is
decided exactly from the tail's slope and offset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from sympy import isprime

from .fgab import FgGroup

DEFAULT_PRECISION = 40


class PrecisionExhausted(ArithmeticError):
    """The working precision is too small to decide the requested claim."""


class UnsupportedGroup(ValueError):
    pass


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


def valuation(n: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; ``None`` for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# truncated p-adic integers


@dataclass(frozen=True)
class PadicInt:
    """An element of ``Z_p`` known modulo ``p^N``."""

    p: int
    value: int
    N: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.p**self.N)

    @classmethod
    def from_digits(cls, p: int, digits: Sequence[int]) -> PadicInt:
        if any(not 0 <= d < p for d in digits):
            raise ValueError("digits must lie in [0, p)")
        return cls(p, sum(d * p**i for i, d in enumerate(digits)), len(digits))

    @property
    def digits(self) -> tuple[int, ...]:
        out, x = [], self.value
        for _ in range(self.N):
            x, d = divmod(x, self.p)
            out.append(d)
        return tuple(out)

    @property
    def valuation(self) -> int | None:
        """Exact valuation, or ``None`` meaning "at least N"."""
        return valuation(self.value, self.p)

    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other: Union[PadicInt, int]) -> tuple[int, int]:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("different primes")
            return other.value, min(self.N, other.N)
        return int(other), self.N

    def __add__(self, other):
        v, N = self._coerce(other)
        return PadicInt(self.p, self.value + v, N)

    __radd__ = __add__

    def __sub__(self, other):
        v, N = self._coerce(other)
        return PadicInt(self.p, self.value - v, N)

    def __rsub__(self, other):
        v, N = self._coerce(other)
        return PadicInt(self.p, v - self.value, N)

    def __neg__(self):
        return PadicInt(self.p, -self.value, self.N)

    def __mul__(self, other):
        v, N = self._coerce(other)
        return PadicInt(self.p, self.value * v, N)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = PadicInt(self.p, other, self.N)
        if not isinstance(other, PadicInt) or other.p != self.p:
            return NotImplemented
        N = min(self.N, other.N)
        return (self.value - other.value) % self.p**N == 0

    def __hash__(self) -> int:
        # equality is modulo the smaller precision, so only p is safe to hash
        return hash(self.p)

    def __repr__(self) -> str:
        return f"PadicInt({self.value} mod {self.p}^{self.N})"


# ---------------------------------------------------------------------------
# coefficient families


@dataclass(frozen=True)
class SumFamily:
    """``⊕_{k>=0} Z/p^{αk+β}``; ``α == 0`` gives a bounded group."""

    p: int
    alpha: int = 1
    beta: int = 0

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.alpha < 0 or self.beta < 0:
            raise UnsupportedGroup("family exponents must be non-negative and non-decreasing")

    def exponent(self, k: int) -> int:
        return self.alpha * k + self.beta

    @property
    def unbounded(self) -> bool:
        return self.alpha > 0

    def truncation_orders(self, J: int) -> list[int]:
        return [self.p ** self.exponent(k) for k in range(J)]

    def truncation(self, J: int) -> FgGroup:
        """``⊕_{k<J} Z/p^{f(k)}`` in canonical form."""
        return FgGroup.from_orders(self.truncation_orders(J))

    def to_dict(self) -> dict:
        return {"family": {"p": self.p, "alpha": self.alpha, "beta": self.beta}}

    def __str__(self) -> str:
        if self.alpha == 0:
            return f"⊕_k Z/{self.p}^{self.beta}"
        f = f"{self.alpha}k" if self.alpha != 1 else "k"
        f = f"{f}+{self.beta}" if self.beta else f
        return f"⊕_k Z/{self.p}^({f})"


Coefficients = Union[FgGroup, SumFamily]


# ---------------------------------------------------------------------------
# valuation sequences


@dataclass(frozen=True)
class AffineTail:
    """Tail entries ``a_k = unit * p^(alpha*k + beta)``."""

    alpha: int
    beta: int
    unit: int = 1

    def exponent(self, k: int) -> int:
        return self.alpha * k + self.beta


@dataclass(frozen=True)
class ValSeq:
    """An element of ``∏_k Z_p``: explicit prefix plus a symbolic tail.

    ``tail=None`` is the zero tail.  Entries in the tail have exact
    valuations however large ``k`` is; prefix entries are known to
    precision ``N``.
    """

    p: int
    prefix: tuple[PadicInt, ...] = ()
    tail: AffineTail | None = None
    N: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        _check_prime(self.p)
        t = self.tail
        if t is not None:
            if t.alpha < 0:
                raise ValueError("tail slope must be non-negative")
            if t.exponent(len(self.prefix)) < 0:
                raise ValueError("tail exponent is negative at the start of the tail")
            if t.unit % self.p == 0:
                raise ValueError("tail unit must be prime to p")
        object.__setattr__(self, "prefix", tuple(
            x if isinstance(x, PadicInt) else PadicInt(self.p, x, self.N) for x in self.prefix
        ))

    @classmethod
    def from_rule(cls, p: int, alpha: int, beta: int, *, unit: int = 1, start: int = 0, N: int = DEFAULT_PRECISION) -> ValSeq:
        """``a_k = unit * p^max(0, αk+β)``, with the first ``start`` entries materialized."""
        L = start
        while alpha * L + beta < 0:
            L += 1
        prefix = tuple(PadicInt(p, unit * p ** max(0, alpha * k + beta), N) for k in range(L))
        return cls(p, prefix, AffineTail(alpha, beta, unit), N)

    @classmethod
    def zero(cls, p: int, N: int = DEFAULT_PRECISION) -> ValSeq:
        return cls(p, (), None, N)

    @property
    def L(self) -> int:
        return len(self.prefix)

    def entry(self, k: int) -> PadicInt:
        if k < self.L:
            return self.prefix[k]
        if self.tail is None:
            return PadicInt(self.p, 0, self.N)
        return PadicInt(self.p, self.tail.unit * self.p ** self.tail.exponent(k), self.N)

    def entry_valuation(self, k: int) -> int | None:
        """Exact valuation of entry ``k``; ``None`` if it is zero to the known precision."""
        if k < self.L:
            return self.prefix[k].valuation
        if self.tail is None:
            return None
        return self.tail.exponent(k)

    def materialize(self, L: int) -> ValSeq:
        """Same sequence with the first ``L`` entries moved into the prefix."""
        if L <= self.L:
            return self
        extra = tuple(self.entry(k) for k in range(self.L, L))
        return ValSeq(self.p, self.prefix + extra, self.tail, self.N)

    def scale(self, m: int) -> ValSeq:
        """``m * a`` for a nonzero integer ``m``."""
        if m == 0:
            return ValSeq.zero(self.p, self.N)
        e = valuation(m, self.p) or 0
        u = m // self.p**e
        tail = None if self.tail is None else AffineTail(self.tail.alpha, self.tail.beta + e, self.tail.unit * u)
        return ValSeq(self.p, tuple(m * x for x in self.prefix), tail, self.N)

    def __rmul__(self, m: int) -> ValSeq:
        return self.scale(m)

    def drop(self, i: int) -> ValSeq:
        """Zero out the first ``i`` entries (a finite-support change)."""
        s = self.materialize(i)
        zeros = tuple(PadicInt(self.p, 0, self.N) for _ in range(i))
        return ValSeq(self.p, zeros + s.prefix[i:], s.tail, self.N)

    def __sub__(self, other: ValSeq) -> ValSeq:
        if other.p != self.p:
            raise ValueError("different primes")
        if other.tail is not None and self.tail is not None and other.tail != self.tail:
            raise ValueError("difference of sequences with different tails is not representable")
        L = max(self.L, other.L)
        a, b = self.materialize(L), other.materialize(L)
        prefix = tuple(x - y for x, y in zip(a.prefix, b.prefix))
        if other.tail is None:
            tail = a.tail
        elif self.tail is None:
            raise ValueError("negated tails are not representable")
        else:
            tail = None
        return ValSeq(self.p, prefix, tail, min(self.N, other.N))

    def to_dict(self) -> dict:
        d: dict = {"p": self.p, "precision": self.N, "prefix": [list(x.digits) for x in self.prefix]}
        d["tail"] = None if self.tail is None else {"alpha": self.tail.alpha, "beta": self.tail.beta, "unit": self.tail.unit}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ValSeq:
        p = d["p"]
        N = d.get("precision", DEFAULT_PRECISION)
        prefix = []
        for x in d.get("prefix", []):
            if isinstance(x, int):
                prefix.append(PadicInt(p, x, N))
            else:
                prefix.append(PadicInt(p, PadicInt.from_digits(p, x).value, N))
        t = d.get("tail")
        tail = None if t is None else AffineTail(t["alpha"], t["beta"], t.get("unit", 1))
        return cls(p, tuple(prefix), tail, N)


# ---------------------------------------------------------------------------
# membership


def classify(x: ValSeq, B: SumFamily) -> dict[str, bool]:
    """Membership of ``x`` in ``S1``, ``S2`` and ``S3`` for ``B``.

    Limits are decided from the tail; the prefix only matters for the
    inequality ``v(a_k) >= f(k)``, which needs precision above ``f(k)`` for
    entries that vanish to the known precision.
    """
    if x.p != B.p:
        raise ValueError("sequence and family use different primes")
    t = x.tail
    to_inf = t is None or t.alpha > 0
    nonneg = True
    for k, a in enumerate(x.prefix):
        v = a.valuation
        if v is None:
            if a.N < B.exponent(k):
                raise PrecisionExhausted(f"entry {k} vanishes mod p^{a.N} but f({k}) = {B.exponent(k)}")
            continue
        if v < B.exponent(k):
            nonneg = False
    if t is not None:
        if t.alpha < B.alpha or t.exponent(x.L) < B.exponent(x.L):
            nonneg = False
    gap_to_inf = t is None or t.alpha > B.alpha
    return {
        "v_to_inf": to_inf,
        "v_minus_f_nonneg": nonneg,
        "v_minus_f_to_inf": nonneg and gap_to_inf,
    }


# ---------------------------------------------------------------------------
# classes in the completions


AMBIENTS = ("Bt", "Bh", "pinf")


@dataclass(frozen=True)
class BtClass:
    """Class of a sequence in ``B~``, ``B^`` or ``p^∞B~`` for a family ``B``."""

    representative: ValSeq
    family: SumFamily
    ambient: str = "Bt"

    def __post_init__(self) -> None:
        if self.ambient not in AMBIENTS:
            raise ValueError(f"ambient must be one of {AMBIENTS}")
        m = classify(self.representative, self.family)
        if not m["v_to_inf"]:
            raise ValueError("representative is not in {v(a_k) -> ∞}")
        if self.ambient == "pinf" and not m["v_minus_f_nonneg"]:
            raise ValueError("representative is not in the kernel of B~ -> B^")

    def is_zero(self) -> bool:
        m = classify(self.representative, self.family)
        if self.ambient == "Bh":
            return m["v_minus_f_nonneg"]
        return m["v_minus_f_to_inf"]

    def __rmul__(self, m: int) -> BtClass:
        return BtClass(m * self.representative, self.family, self.ambient)

    def equals(self, other: BtClass) -> bool:
        return BtClass(self.representative - other.representative, self.family, self.ambient).is_zero()

    def b_coordinates(self, K: int) -> list[PadicInt]:
        """``b_k = a_k / p^{f(k)}`` for ``k < K`` (only for classes in ``p^∞B~``)."""
        out = []
        for k in range(K):
            a = self.representative.entry(k)
            f = self.family.exponent(k)
            if a.value % self.family.p**f:
                raise ValueError("entry not divisible by p^f(k)")
            out.append(PadicInt(a.p, a.value // a.p**f, a.N - f))
        return out

    def to_dict(self) -> dict:
        return {"ambient": self.ambient, "representative": self.representative.to_dict(),
                **self.family.to_dict()}


# ---------------------------------------------------------------------------
# completions


@dataclass(frozen=True)
class CompletionTriple:
    p: int
    B: str
    completion: str  # B^
    ext_completion: str  # B~
    pinf: str  # p^∞B~
    kernel_is_zero: bool
    map_description: str
    precision: int
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "B": self.B, "completion": self.completion, "ext_completion": self.ext_completion,
            "pinf": self.pinf, "kernel_is_zero": self.kernel_is_zero, "map": self.map_description,
            "precision": self.precision, "checks": self.checks,
        }


def _fg_pieces(B: FgGroup, p: int) -> tuple[int, list[int]]:
    """Free rank and the p-primary exponents of ``B``."""
    exps = [valuation(d, p) or 0 for d in B.invariant_factors]
    return B.free_rank, [e for e in exps if e > 0]


def completion_triple(B: Coefficients, p: int | None = None, *, precision: int = DEFAULT_PRECISION) -> CompletionTriple:
    from .towers import pext_ind, prufer_tower
    from .fgab import n_torsion_and_quotient

    if isinstance(B, SumFamily):
        p = B.p if p is None else p
        if p != B.p:
            raise UnsupportedGroup("completion at a prime different from the family prime")
        if not B.unbounded:
            desc = f"⊕ Z/{p}^{B.beta} (bounded, equal to B)"
            return CompletionTriple(p, str(B), desc, desc, "0", True, "B~ -> B^ is an isomorphism", precision,
                                    {"pext_zero": pext_ind(prufer_tower(p), B).is_zero})
        f = "f(k)" if (B.alpha, B.beta) != (1, 0) else "k"
        return CompletionTriple(
            p, str(B),
            completion=f"{{a in ∏ Z_{p} : v(a_k)->∞}} / {{a : 0 <= v(a_k)-{f}}}",
            ext_completion=f"{{a in ∏ Z_{p} : v(a_k)->∞}} / {{a : 0 <= v(a_k)-{f} -> ∞}}",
            pinf=f"∏_k Z_{p} / {{b : v(b_k) -> ∞}}  (a_k = {p}^{f} b_k)",
            kernel_is_zero=False,
            map_description="B~ -> B^ is onto with kernel p^∞B~",
            precision=precision,
            checks={"pext_zero": pext_ind(prufer_tower(p), B).is_zero},
        )
    if not isinstance(B, FgGroup):
        raise UnsupportedGroup(f"unsupported coefficient group {B!r}")
    if p is None:
        raise ValueError("a prime is required for finitely generated B")
    _check_prime(p)
    r, exps = _fg_pieces(B, p)
    m = max(exps, default=0)
    # B/p^k B stabilizes once k reaches the largest p-exponent
    quots = [n_torsion_and_quotient(B, p**k).quotient.group for k in range(m + 1, m + 4)]
    ranks_ok = all(q.invariant_factors.count(p ** (m + 1 + i)) == r for i, q in enumerate(quots) if r)
    parts = [f"Z/{p}^{e}" for e in exps] + ([f"Z_{p}^{r}"] if r else [])
    desc = " + ".join(parts) if parts else "0"
    pext = pext_ind(prufer_tower(p), B)
    return CompletionTriple(
        p, str(B), desc, desc, "0", True, "B~ -> B^ is an isomorphism", precision,
        {"pext_zero": pext.is_zero, "quotient_tower_stable_at": m, "free_part_checked": ranks_ok},
    )


# ---------------------------------------------------------------------------
# the witness in p^∞B~


@dataclass(frozen=True)
class PinfWitness:
    x: BtClass  # in p^∞B~
    nonzero: bool
    scaled_nonzero: dict[int, bool]  # j -> p^j x != 0 (decided from the tail)
    b_check: dict[int, bool]  # j -> p^j b != 0 at the working precision
    divided: BtClass  # y in B~ with p y = x
    division_ok: bool
    divided_in_pinf: bool
    precision: int

    def to_dict(self) -> dict:
        return {
            "witness": self.x.to_dict(), "nonzero": self.nonzero,
            "scaled_nonzero": {str(k): v for k, v in self.scaled_nonzero.items()},
            "b_check": {str(k): v for k, v in self.b_check.items()},
            "divided": self.divided.to_dict(), "division_ok": self.division_ok,
            "divided_in_pinf": self.divided_in_pinf, "precision": self.precision,
        }


def finite_support_in_kernel(d: ValSeq, B: SumFamily) -> bool:
    """A finite-support sequence lies in ``S3`` iff each entry has ``v >= f(k)``.

    Beyond the support the entries vanish, so ``v - f -> ∞`` holds
    vacuously; only the finitely many explicit entries need checking.
    """
    if d.tail is not None:
        raise ValueError("sequence does not have finite support")
    return classify(d, B)["v_minus_f_to_inf"]


def divide_by_p(x: BtClass) -> BtClass:
    """A ``y`` in ``B~`` with ``p y = x``.

    Entries of valuation 0 are dropped first; they sit where ``f(k) = 0``,
    so the change lies in ``S3``.  What remains is divisible entrywise.
    """
    B, a = x.family, x.representative
    p = B.p
    t = a.tail
    L = a.L
    if t is not None:
        while t.exponent(L) < 1:
            L += 1
    a = a.materialize(L)
    prefix = []
    for k, e in enumerate(a.prefix):
        v = e.valuation
        if v == 0:
            prefix.append(PadicInt(p, 0, e.N))
        else:
            prefix.append(PadicInt(p, e.value // p, e.N - 1))
    tail = None if t is None else AffineTail(t.alpha, t.beta - 1, t.unit)
    return BtClass(ValSeq(p, tuple(prefix), tail, a.N), B, "Bt")


def pinf_witness(B: SumFamily, k: int = 10, *, precision: int = DEFAULT_PRECISION) -> PinfWitness:
    """The class of ``b = (1, 1, 1, ...)``, i.e. ``a_k = p^{f(k)}``, with its checks."""
    if not isinstance(B, SumFamily) or not B.unbounded:
        raise UnsupportedGroup("p^∞B~ has a nonzero witness only for unbounded families")
    if precision < k + 2:
        raise PrecisionExhausted(f"precision {precision} < k + 2 = {k + 2}")
    a = ValSeq(B.p, (), AffineTail(B.alpha, B.beta), precision)
    x = BtClass(a, B, "pinf")
    scaled = {j: not (B.p**j * x).is_zero() for j in range(k + 1)}
    one = PadicInt(B.p, 1, precision)
    b_check = {j: not (B.p**j * one).is_zero() for j in range(k + 1)}
    y = divide_by_p(x)
    diff = (B.p * y.representative) - x.representative
    division_ok = finite_support_in_kernel(diff, B) if diff.tail is None else False
    y_in_pinf = classify(y.representative, B)["v_minus_f_nonneg"]
    return PinfWitness(x, not x.is_zero(), scaled, b_check, y, division_ok, y_in_pinf, precision)


# ---------------------------------------------------------------------------
# B~ -> B^ and the class w


class ConsistencyFault(AssertionError):
    pass


@dataclass(frozen=True)
class WbiReport:
    B: str
    p: int
    pinf_zero: bool  # condition (i), from lim^1 of the Hom tower
    iso: bool  # condition (ii), from the valuation description
    kernel_witness: PinfWitness | None
    precision: int

    @property
    def consistent(self) -> bool:
        return self.pinf_zero == self.iso

    def to_dict(self) -> dict:
        return {
            "B": self.B, "p": self.p, "pinf_zero": self.pinf_zero, "iso": self.iso,
            "consistent": self.consistent, "precision": self.precision,
            "kernel_witness": None if self.kernel_witness is None else self.kernel_witness.to_dict(),
        }


def _iso_from_valuations(B: Coefficients, p: int) -> tuple[bool, ValSeq | None]:
    """Whether ``S1 ∩ S2 == S3``, with an element of the difference if not."""
    if isinstance(B, FgGroup):
        # finitely many coordinates: "-> ∞" is vacuous, so S1 ∩ S2 == S3
        return True, None
    if not B.unbounded:
        # v -> ∞ already forces v - β -> ∞
        return True, None
    cand = ValSeq(B.p, (), AffineTail(B.alpha, B.beta))
    m = classify(cand, B)
    if m["v_to_inf"] and m["v_minus_f_nonneg"] and not m["v_minus_f_to_inf"]:
        return False, cand
    raise ConsistencyFault("unbounded family without a kernel element")  # pragma: no cover


def wbi_check(B: Coefficients, p: int | None = None, *, precision: int = DEFAULT_PRECISION, k: int = 10) -> WbiReport:
    """Evaluate ``p^∞B~ = 0`` and ``B~ ≅ B^`` by separate routes and compare."""
    from .towers import pext_ind, prufer_tower

    if isinstance(B, SumFamily):
        p = B.p if p is None else p
        if p != B.p:
            raise UnsupportedGroup("prime differs from the family prime")
    elif isinstance(B, FgGroup):
        if p is None:
            raise ValueError("a prime is required for finitely generated B")
        _check_prime(p)
    else:
        raise UnsupportedGroup(f"unsupported coefficient group {B!r}")
    pinf_zero = pext_ind(prufer_tower(p), B).is_zero
    iso, _ = _iso_from_valuations(B, p)
    if pinf_zero != iso:
        raise ConsistencyFault(f"p^∞B~ = 0 is {pinf_zero} but B~ ≅ B^ is {iso} for {B}")
    witness = None if pinf_zero else pinf_witness(B, min(k, precision - 2), precision=precision)
    return WbiReport(str(B), p, pinf_zero, iso, witness, precision)


@dataclass(frozen=True)
class WCertificate:
    B: str
    p: int
    k: int
    kind: str  # "order_lower_bound" or "trivial"
    claims: tuple[str, ...]
    supporting_witness: BtClass | None
    precision: int

    def to_dict(self) -> dict:
        return {
            "B": self.B, "p": self.p, "k": self.k, "kind": self.kind, "claims": list(self.claims),
            "order_lower_bound": self.p ** (self.k + 1) if self.kind == "order_lower_bound" else None,
            "supporting_witness": None if self.supporting_witness is None else self.supporting_witness.to_dict(),
            "precision": self.precision,
        }


def w_certificate(B: Coefficients, k: int, p: int | None = None, *, precision: int = DEFAULT_PRECISION) -> WCertificate:
    """Certify ``p^k w != 0`` from an element of ``p^∞B~`` not killed by ``p^k``.

    If ``p^k w`` vanished then ``p^k`` would kill ``p^∞B~``; the witness
    shows it does not.  When ``p^∞B~ = 0`` the class ``w`` is zero and the
    certificate is trivial.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if precision < k + 2:
        raise PrecisionExhausted(f"precision {precision} < k + 2 = {k + 2}")
    rep = wbi_check(B, p, precision=precision, k=k)
    if rep.pinf_zero:
        return WCertificate(rep.B, rep.p, k, "trivial", ("p^∞B~ = 0", "w = 0"), None, precision)
    x = rep.kernel_witness.x
    scaled = rep.p**k * x
    if scaled.is_zero():  # pragma: no cover - excluded by the slope argument
        raise ConsistencyFault("p^k x vanished")
    claims = (
        f"p^{k} x != 0 for x in p^∞B~",
        f"p^{k} w != 0",
        f"order of w >= {rep.p ** (k + 1)}",
        "w is not divisible by p",
        "B~ -> B^ does not split",
    )
    return WCertificate(rep.B, rep.p, k, "order_lower_bound", claims, scaled, precision)
