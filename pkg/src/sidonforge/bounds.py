"""Closed-form upper bounds and exact maxima for small instances.

``bound_section2`` is the energy bound for sets whose representation function
is at most ``k`` off the doubling set and ``k + l`` on it::

    |A| < sqrt((k - 1) q) + 1 + l/2 + l (l + 1) / (2 (k - 1))

``exact_beta`` and ``exact_alpha`` compute beta_g(n) (subsets of {1..n}) and
alpha_g(q) (subsets of Z_q) by branch and bound, see ``_search``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import max_gsidon
from .errors import CeilingExceeded
from .groups import GroupSpec
from .repfn import Flavor, SidonSet

# (weight of a pair a1 != a2, weight of a1 = a2) for each flavor's count.
_WEIGHTS = {
    Flavor.ORDERED: (2, 1),
    Flavor.RESTRICTED: (2, 0),
    Flavor.UNORDERED: (1, 1),
}

DEFAULT_ALPHA_CEILING = 30


def default_beta_ceiling(g: int) -> int:
    if g <= 2:
        return 60
    if g <= 4:
        return 44
    return 32


def bound_section2(q: int, k: int, l: int) -> float:
    if k < 2:
        raise ValueError("k must be >= 2")
    if l < 0 or q < 1:
        raise ValueError("need l >= 0 and q >= 1")
    return math.sqrt((k - 1) * q) + 1 + l / 2 + l * (l + 1) / (2 * (k - 1))


def corollary_parameters(g: int, weak: bool = False, q: int | None = None) -> tuple[int, int]:
    """(k, l) fed to :func:`bound_section2` for a g-Sidon or weak g-Sidon set."""
    if g < 2:
        raise ValueError("g must be >= 2")
    if weak:
        if q is None:
            raise ValueError("the weak case depends on the parity of q")
        return (g, 2) if q % 2 == 0 else (g, 1)
    if g % 2 == 0:
        return g, 0
    return g - 1, 1


def bound_corollaries(q: int, g: int, weak: bool = False) -> float:
    """Upper bound on |A| for A in a group of order q (weak: r' <= g, cyclic only)."""
    k, l = corollary_parameters(g, weak, q)
    return bound_section2(q, k, l)


def bound_trivial_group(q: int, g: int) -> float:
    return math.sqrt(g * q)


def bound_integer_classics(n: int, g: int) -> dict[str, float]:
    """Classical bounds for g-Sidon subsets of {1..n} that apply to this g."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = {"trivial": math.sqrt(2 * g * n)}
    if g == 2:
        out["lindstrom"] = math.sqrt(n) + n**0.25 + 1
    if g == 3:
        out["ruzsa_weak"] = math.sqrt(n) + 4 * n**0.25 + 11
    return out


@dataclass
class BoundReport:
    """Named upper bounds for one instance, with slack against a known set size."""

    context: dict
    bounds: dict[str, float]
    applicable: dict[str, bool] = field(default_factory=dict)
    optimum: int | None = None

    def slack(self, size: int | None = None) -> dict[str, float]:
        size = self.optimum if size is None else size
        if size is None:
            return {}
        return {k: v - size for k, v in self.bounds.items() if self.applicable.get(k, True)}

    def consistent(self) -> bool:
        return all(s >= 0 for s in self.slack().values())

    def to_dict(self) -> dict:
        return {
            "context": self.context,
            "bounds": self.bounds,
            "applicable": self.applicable,
            "optimum": self.optimum,
            "slack": self.slack(),
        }


def cyclic_bound_report(q: int, g: int, flavor: Flavor = Flavor.ORDERED) -> BoundReport:
    flavor = Flavor(flavor)
    bounds = {"trivial": bound_trivial_group(q, g)}
    applicable = {"trivial": flavor is Flavor.ORDERED}
    if g >= 2:
        k, l = corollary_parameters(g)
        bounds["section2"] = bound_section2(q, k, l)
        bounds["corollary_even" if g % 2 == 0 else "corollary_odd"] = bounds["section2"]
        applicable["section2"] = flavor is Flavor.ORDERED
        applicable["corollary_even" if g % 2 == 0 else "corollary_odd"] = flavor is Flavor.ORDERED
        bounds["corollary_weak"] = bound_corollaries(q, g, weak=True)
        applicable["corollary_weak"] = flavor in (Flavor.ORDERED, Flavor.RESTRICTED)
    return BoundReport({"group": f"Z_{q}", "q": q, "g": g, "flavor": flavor.value}, bounds, applicable)


def interval_bound_report(n: int, g: int, flavor: Flavor = Flavor.ORDERED) -> BoundReport:
    flavor = Flavor(flavor)
    bounds = bound_integer_classics(n, g)
    applicable = {name: flavor is Flavor.ORDERED for name in bounds}
    return BoundReport({"group": f"[1,{n}]", "n": n, "g": g, "flavor": flavor.value}, bounds, applicable)


def _cap_for_cyclic(q: int, g: int, flavor: Flavor) -> int:
    if flavor is Flavor.UNORDERED:
        g_ord = 2 * g  # r <= 2 r*
        return min(q, math.floor(math.sqrt(g_ord * q)))
    if g < 2:
        return min(q, 1)
    return min(q, math.floor(bound_corollaries(q, g, weak=flavor is Flavor.RESTRICTED)))


def _run(universe, forced, n_sums, mod, g, flavor, upper):
    w_cross, w_self = _WEIGHTS[Flavor(flavor)]
    size, witness = max_gsidon(
        np.asarray(universe, dtype=np.int64), forced, n_sums, mod, g, w_cross, w_self, 0, upper
    )
    return int(size), [int(x) for x in witness]


def exact_beta(
    n: int,
    g: int,
    flavor: Flavor = Flavor.ORDERED,
    ceiling: int | None = None,
    prune_with_bounds: bool = True,
) -> tuple[int, SidonSet]:
    """beta_g(n): largest g-Sidon subset of {1, ..., n}, with a verified witness.

    Translation lets the search assume 1 is in the set.  With
    ``prune_with_bounds`` the search stops as soon as a closed-form bound is
    attained; turn it off when the result is used to test those bounds.
    """
    flavor = Flavor(flavor)
    if g < 1:
        raise ValueError("g must be >= 1")
    ceiling = default_beta_ceiling(g) if ceiling is None else ceiling
    if n > ceiling:
        raise CeilingExceeded(f"n = {n} exceeds the search ceiling {ceiling}")
    group = GroupSpec.interval(n)
    if n < 1:
        return 0, SidonSet.build(group, [], claimed_g=g, flavor=flavor).verify()
    upper = n
    if flavor is Flavor.ORDERED and prune_with_bounds:
        upper = min(n, math.floor(bound_integer_classics(n, g)["trivial"]))
        if g == 2:
            upper = min(upper, math.floor(bound_integer_classics(n, 2)["lindstrom"]))
    size, witness = _run(range(1, n + 1), 1, 2 * n + 1, 0, g, flavor, max(upper, 1))
    A = SidonSet.build(group, witness, claimed_g=g, flavor=flavor).verify()
    if not A.verified or len(A) != size:
        raise AssertionError("search returned an invalid witness")
    return size, A


def exact_alpha(
    q: int,
    g: int,
    flavor: Flavor = Flavor.ORDERED,
    ceiling: int = DEFAULT_ALPHA_CEILING,
    prune_with_bounds: bool = True,
) -> tuple[int, SidonSet]:
    """alpha_g(q): largest g-Sidon subset of Z_q; translation fixes 0 in the set."""
    flavor = Flavor(flavor)
    if g < 1:
        raise ValueError("g must be >= 1")
    if q > ceiling:
        raise CeilingExceeded(f"q = {q} exceeds the search ceiling {ceiling}")
    group = GroupSpec.cyclic(q)
    upper = _cap_for_cyclic(q, g, flavor) if prune_with_bounds else q
    size, witness = _run(range(q), 0, q, q, g, flavor, max(upper, 1))
    A = SidonSet.build(group, witness, claimed_g=g, flavor=flavor).verify()
    if not A.verified or len(A) != size:
        raise AssertionError("search returned an invalid witness")
    return size, A


def best_gsidon_from_zero(n: int, g: int, ceiling: int | None = None) -> SidonSet:
    """Largest ordered g-Sidon subset of {0..n} containing 0 (shifted beta witness)."""
    _, A = exact_beta(n + 1, g, ceiling=ceiling)
    return SidonSet.build(GroupSpec.interval(n), [a - 1 for a in A], claimed_g=g).verify()
