"""Representation functions r, r' and r* over any GroupSpec.

Two engines produce the same :class:`RepProfile`:

* :func:`rep_profile_direct` enumerates all ordered pairs (works everywhere),
* :func:`rep_profile_fft` squares the 0/1 indicator polynomial with a
  floating point FFT and rounds; it refuses to answer when exactness cannot be
  guaranteed.

All three flavors are derived from the ordered count ``r`` and the doubling
count ``dbl(x) = #{a in A : 2a = x}``::

    r'(x) = r(x) - dbl(x)
    r*(x) = (r(x) + dbl(x)) / 2
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

import numpy as np

from .errors import GroupUnsupported, PrecisionOverflow
from .groups import GroupKind, GroupSpec, Value

# Largest set for which the float64 FFT rounding argument below is made.
FFT_MAX_SIZE = 2**26
_UNIT_ROUNDOFF = 2.0**-53
_PAIR_BLOCK = 1 << 22


class Flavor(str, enum.Enum):
    ORDERED = "ordered"  # r
    RESTRICTED = "restricted"  # r', distinct summands (weak g-Sidon)
    UNORDERED = "unordered"  # r*, {a1, a2} identified


@dataclass(frozen=True)
class SidonSet:
    """A finite subset of a group with an optional representation cap.

    ``verified`` is only ever set by :meth:`verify`; ``achieved_g`` is the exact
    maximum of the flavor's representation function when known.
    """

    group: GroupSpec
    elements: tuple
    claimed_g: int | None = None
    flavor: Flavor = Flavor.ORDERED
    verified: bool = False
    achieved_g: int | None = None
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def build(cls, group: GroupSpec, elements: Iterable, **kw) -> SidonSet:
        canon = sorted({group.canonical(x) for x in elements})
        return cls(group, tuple(canon), **kw)

    def __post_init__(self):
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if any(b <= a for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError("elements must be strictly sorted; use SidonSet.build")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return self.group.canonical(x) in set(self.elements)

    @property
    def indices(self) -> np.ndarray:
        g = self.group
        if g.kind is GroupKind.PRODUCT:
            arr = np.array(self.elements, dtype=np.int64).reshape(-1, 2)
            return arr[:, 0] * g.param + arr[:, 1]
        return np.array(self.elements, dtype=np.int64)

    def profile(self) -> RepProfile:
        return rep_profile(self)

    def verify(
        self, g: int | None = None, flavor: Flavor | None = None, profile: RepProfile | None = None
    ) -> SidonSet:
        """Return a copy with ``verified`` and ``achieved_g`` recomputed exactly.

        A precomputed ``profile`` of this very set may be passed to skip recounting.
        """
        flavor = Flavor(flavor or self.flavor)
        g = self.claimed_g if g is None else g
        achieved = (profile or rep_profile(self)).max_of(flavor)
        ok = g is not None and achieved <= g
        return replace(self, claimed_g=g, flavor=flavor, verified=ok, achieved_g=achieved)


@dataclass(frozen=True)
class RepProfile:
    """Dense count tables indexed by sum slot (see ``GroupSpec.index``)."""

    group: GroupSpec
    r: np.ndarray
    r_restricted: np.ndarray
    r_unordered: np.ndarray
    size: int

    @property
    def max_r(self) -> int:
        return int(self.r.max()) if self.r.size else 0

    @property
    def max_restricted(self) -> int:
        return int(self.r_restricted.max()) if self.r.size else 0

    @property
    def max_unordered(self) -> int:
        return int(self.r_unordered.max()) if self.r.size else 0

    def counts(self, flavor: Flavor = Flavor.ORDERED) -> np.ndarray:
        flavor = Flavor(flavor)
        if flavor is Flavor.ORDERED:
            return self.r
        if flavor is Flavor.RESTRICTED:
            return self.r_restricted
        return self.r_unordered

    def max_of(self, flavor: Flavor = Flavor.ORDERED) -> int:
        c = self.counts(flavor)
        return int(c.max()) if c.size and self.size else 0

    @property
    def argmax(self) -> Value | None:
        """Smallest sum attaining ``max_r``; None for the empty set."""
        if not self.size:
            return None
        return self.group.from_index(int(np.argmax(self.r)))

    def as_dict(self, flavor: Flavor = Flavor.ORDERED) -> dict:
        c = self.counts(flavor)
        nz = np.flatnonzero(c)
        return {self.group.from_index(i): int(c[i]) for i in nz}

    def __getitem__(self, x) -> int:
        return self.count(x)

    def count(self, x, flavor: Flavor = Flavor.ORDERED) -> int:
        g = self.group
        i = g.index(g.canonical(x)) if g.kind is not GroupKind.INTERVAL else int(x)
        c = self.counts(flavor)
        return int(c[i]) if 0 <= i < c.size else 0

    def same_counts(self, other: RepProfile) -> bool:
        return (
            self.group == other.group
            and np.array_equal(self.r, other.r)
            and np.array_equal(self.r_restricted, other.r_restricted)
            and np.array_equal(self.r_unordered, other.r_unordered)
        )


def _sum_index(group: GroupSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Flat index of x + y for index arrays x, y (broadcasting)."""
    if group.kind is GroupKind.INTERVAL:
        return x + y
    if group.kind is GroupKind.CYCLIC:
        return (x + y) % group.param
    p = group.param
    return ((x // p + y // p) % p) * p + (x % p + y % p) % p


def _finish(group: GroupSpec, idx: np.ndarray, r: np.ndarray) -> RepProfile:
    dbl = np.bincount(_sum_index(group, idx, idx), minlength=group.sum_range).astype(np.int64)
    r = r.astype(np.int64)
    return RepProfile(group, r, r - dbl, (r + dbl) // 2, int(idx.size))


def rep_profile_direct(A: SidonSet) -> RepProfile:
    """Exact counts by enumerating all ordered pairs, in row blocks."""
    group = A.group
    idx = A.indices
    r = np.zeros(group.sum_range, dtype=np.int64)
    rows = max(1, _PAIR_BLOCK // max(1, idx.size))
    for start in range(0, idx.size, rows):
        block = _sum_index(group, idx[start : start + rows, None], idx[None, :])
        r += np.bincount(block.ravel(), minlength=group.sum_range)
    return _finish(group, idx, r)


def _fft_error_bound(size: int, length: int) -> float:
    # Forward/backward float64 FFT error for a product of 0/1 vectors with
    # `size` ones is below ~ c * u * log2(L) * ||x||_2^2 with small c; take c = 8.
    return 8.0 * _UNIT_ROUNDOFF * math.log2(max(length, 2)) * size


def rep_profile_fft(A: SidonSet) -> RepProfile:
    """Squared indicator polynomial via real FFT, rounded to exact integers."""
    group = A.group
    if group.kind is GroupKind.PRODUCT:
        raise GroupUnsupported("the FFT engine handles intervals and cyclic groups only")
    idx = A.indices
    order = group.order
    length = 1 << max(1, (2 * order - 1).bit_length())
    if idx.size > FFT_MAX_SIZE or _fft_error_bound(idx.size, length) >= 0.5:
        raise PrecisionOverflow(f"cannot guarantee exact counts for |A| = {idx.size}")
    ind = np.zeros(length)
    ind[idx] = 1.0
    f = np.fft.rfft(ind)
    lin = np.fft.irfft(f * f, n=length)[: 2 * order - 1]
    rounded = np.rint(lin)
    if lin.size and np.max(np.abs(lin - rounded)) >= 0.25:
        raise PrecisionOverflow("floating point residue too large to round safely")
    lin = rounded.astype(np.int64)
    if group.kind is GroupKind.INTERVAL:
        r = lin
    else:
        r = lin[:order].copy()
        r[: order - 1] += lin[order:]
    return _finish(group, idx, r)


def rep_profile(A: SidonSet) -> RepProfile:
    """Fastest exact engine for the group; falls back to direct enumeration."""
    if A.group.kind is GroupKind.PRODUCT or len(A) < 64:
        return rep_profile_direct(A)
    try:
        return rep_profile_fft(A)
    except PrecisionOverflow:
        return rep_profile_direct(A)


class Violation(NamedTuple):
    x: Value
    count: int


def verify_g_sidon(A: SidonSet, g: int, flavor: Flavor = Flavor.ORDERED) -> Violation | None:
    """None if the flavor's count is <= g everywhere, else the smallest violating sum."""
    counts = rep_profile(A).counts(flavor)
    bad = np.flatnonzero(counts > g)
    if bad.size == 0:
        return None
    i = int(bad[0])
    return Violation(A.group.from_index(i), int(counts[i]))


def difference_profile(A: SidonSet) -> dict[int, int]:
    """Nonzero values of d(x) = #{(a1, a2) : a1 - a2 = x}.

    Cyclic differences are reduced into [0, q); interval differences keep their sign.
    """
    group = A.group
    if group.kind is GroupKind.PRODUCT:
        raise GroupUnsupported("difference profiles are defined for intervals and cyclic groups")
    idx = A.indices
    if idx.size == 0:
        return {}
    diff = idx[:, None] - idx[None, :]
    if group.kind is GroupKind.CYCLIC:
        diff %= group.param
        offset = 0
    else:
        offset = group.param
        diff += offset
    counts = np.bincount(diff.ravel())
    return {int(i) - offset: int(counts[i]) for i in np.flatnonzero(counts)}
