"""Modular arithmetic and the three ambient structures.

A :class:`GroupSpec` is one of

* ``interval(n)``: the integers ``{0, 1, ..., n}``; sums live in ``[0, 2n]``,
* ``cyclic(q)``: the residues ``Z_q``,
* ``product(p)``: ``Z_p x Z_p`` for an odd prime ``p``.

Elements are stored canonically: plain ints for intervals and cyclic groups,
``(a, b)`` tuples reduced into ``[0, p)`` for products.  Every element also has
a flat *index* (``a * p + b`` for products) so that dense numpy arrays can be
used as representation-count tables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import MixedGroups, NotInvertible, NotPrime

Value = Union[int, tuple[int, int]]

# Bases proven sufficient for every n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def _require_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion."""
    _require_odd_prime(p)
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def legendre_table(p: int) -> list[int]:
    """``[legendre(a, p) for a in range(p)]`` computed by squaring once."""
    _require_odd_prime(p)
    table = [-1] * p
    table[0] = 0
    for x in range(1, (p + 1) // 2):
        table[x * x % p] = 1
    return table


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise ValueError("modulus must be positive")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} has no inverse modulo {m}") from None


class GroupKind(str, enum.Enum):
    INTERVAL = "interval"
    CYCLIC = "cyclic"
    PRODUCT = "product"


@dataclass(frozen=True)
class GroupSpec:
    """Ambient structure; ``param`` is n, q or p depending on ``kind``."""

    kind: GroupKind
    param: int

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind(self.kind))
        if self.kind is GroupKind.INTERVAL and self.param < 0:
            raise ValueError("interval length must be >= 0")
        if self.kind is GroupKind.CYCLIC and self.param < 1:
            raise ValueError("cyclic modulus must be >= 1")
        if self.kind is GroupKind.PRODUCT:
            _require_odd_prime(self.param)

    @classmethod
    def interval(cls, n: int) -> GroupSpec:
        return cls(GroupKind.INTERVAL, n)

    @classmethod
    def cyclic(cls, q: int) -> GroupSpec:
        return cls(GroupKind.CYCLIC, q)

    @classmethod
    def product(cls, p: int) -> GroupSpec:
        return cls(GroupKind.PRODUCT, p)

    @property
    def order(self) -> int:
        if self.kind is GroupKind.INTERVAL:
            return self.param + 1
        if self.kind is GroupKind.CYCLIC:
            return self.param
        return self.param * self.param

    @property
    def sum_range(self) -> int:
        """Number of slots needed to index every pairwise sum."""
        if self.kind is GroupKind.INTERVAL:
            return 2 * self.param + 1
        return self.order

    def canonical(self, x) -> Value:
        """Reduce ``x`` into canonical form, rejecting out-of-range interval values."""
        if self.kind is GroupKind.PRODUCT:
            a, b = x
            return (int(a) % self.param, int(b) % self.param)
        x = int(x)
        if self.kind is GroupKind.CYCLIC:
            return x % self.param
        if not 0 <= x <= self.param:
            raise ValueError(f"{x} is outside the interval [0, {self.param}]")
        return x

    def index(self, x: Value) -> int:
        if self.kind is GroupKind.PRODUCT:
            return x[0] * self.param + x[1]
        return x

    def from_index(self, i: int) -> Value:
        if self.kind is GroupKind.PRODUCT:
            return divmod(int(i), self.param)
        return int(i)

    def describe(self) -> dict:
        return {"kind": self.kind.value, "param": self.param}

    def __str__(self):
        if self.kind is GroupKind.INTERVAL:
            return f"[0,{self.param}]"
        if self.kind is GroupKind.CYCLIC:
            return f"Z_{self.param}"
        return f"Z_{self.param}xZ_{self.param}"


@dataclass(frozen=True)
class GroupElement:
    """An element tagged with its group; ``extended`` marks interval sums beyond n."""

    group: GroupSpec
    value: Value
    extended: bool = False

    @classmethod
    def of(cls, group: GroupSpec, x) -> GroupElement:
        return cls(group, group.canonical(x))


def add(x: GroupElement, y: GroupElement, group: GroupSpec | None = None) -> GroupElement:
    group = group or x.group
    if x.group != group or y.group != group:
        raise MixedGroups(f"cannot add elements of {x.group} and {y.group} in {group}")
    if group.kind is GroupKind.PRODUCT:
        p = group.param
        return GroupElement(group, ((x.value[0] + y.value[0]) % p, (x.value[1] + y.value[1]) % p))
    if group.kind is GroupKind.CYCLIC:
        return GroupElement(group, (x.value + y.value) % group.param)
    s = x.value + y.value
    return GroupElement(group, s, extended=s > group.param)
