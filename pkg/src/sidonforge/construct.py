"""Explicit g-Sidon constructions.

Pipeline for dense sets mod q = p^2 s:

1. ``parabola_set``: the parabola ``{(x, x^2/u)}`` in Z_p x Z_p;
2. ``build_parabola_union``: k consecutive parabolas u = t+1..t+k, with the
   shift t chosen to minimise the exact character sum ``character_sum_S``;
3. ``project_to_cyclic``: relabel (a, b) -> a + c p + b s p, c < s.

``paste`` then lays copies of a cyclic set along an integer g1-Sidon pattern,
and ``assemble_integer_gsidon`` picks the best such combination for a target
cap g inside [1, N].
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _search
from .bounds import best_gsidon_from_zero, default_beta_ceiling
from .errors import DegenerateSum, InfeasibleParameters, KTooLarge, NormalizationError, SidonError
from .groups import GroupKind, GroupSpec, is_prime, legendre_table, mod_inverse, primes_between
from .repfn import Flavor, SidonSet, rep_profile, rep_profile_direct

# Pasted sets up to this length are verified exactly.
DESK_VERIFY_LIMIT = 4_000_000


def target_g(k: int) -> int:
    """floor(k^2 + 2 k^(3/2)) in exact integer arithmetic."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return k * k + math.isqrt(4 * k**3)


def parabola_set(p: int, u: int) -> SidonSet:
    if u % p == 0:
        raise ValueError("u must be a nonzero residue")
    inv = mod_inverse(u, p)
    pts = [(x, x * x * inv % p) for x in range(p)]
    return SidonSet.build(GroupSpec.product(p), pts, provenance={"construction": "parabola", "p": p, "u": u % p})


def _closed_form(u: int, v: int, a: int, b: int, p: int, chi: list[int]) -> int:
    if (u + v) % p == 0:
        raise DegenerateSum(f"u + v = 0 mod {p}")
    delta = 4 * u * v * ((u + v) * b - a * a) % p
    return 1 + chi[delta]


def _count_by_enumeration(u: int, v: int, a: int, b: int, p: int) -> int:
    iu, iv = mod_inverse(u, p), mod_inverse(v, p)
    return sum(1 for x in range(p) if (x * x * iu + (a - x) ** 2 * iv - b) % p == 0)


def pair_rep_count(u: int, v: int, point: tuple[int, int], p: int) -> int:
    """#{(a1, a2) in A_u x A_v : a1 + a2 = point}.

    Uses 1 + (Delta/p) with Delta = 4uv((u+v)b - a^2); when u + v = 0 mod p the
    closed form does not apply and the pairs are enumerated instead.
    """
    if u % p == 0 or v % p == 0:
        raise ValueError("u and v must be nonzero mod p")
    a, b = point[0] % p, point[1] % p
    try:
        return _closed_form(u % p, v % p, a, b, p, legendre_table(p))
    except DegenerateSum:
        return _count_by_enumeration(u, v, a, b, p)


def pair_rep_table(u: int, v: int, p: int, method: str = "closed") -> np.ndarray:
    """p x p table of pair counts; ``method`` is "closed" or "direct" (enumeration)."""
    u, v = u % p, v % p
    if method == "closed":
        if (u + v) % p == 0:
            raise DegenerateSum(f"u + v = 0 mod {p}")
        chi = np.array(legendre_table(p), dtype=np.int64)
        a = np.arange(p)[:, None]
        b = np.arange(p)[None, :]
        delta = (4 * u * v % p) * (((u + v) * b - a * a) % p) % p
        return 1 + chi[delta]
    x = np.arange(p)
    pu = x * x * mod_inverse(u, p) % p
    pv = x * x * mod_inverse(v, p) % p
    sa = (x[:, None] + x[None, :]) % p
    sb = (pu[:, None] + pv[None, :]) % p
    return np.bincount((sa * p + sb).ravel(), minlength=p * p).reshape(p, p)


def character_sums(p: int, k: int) -> np.ndarray:
    """S_t for every admissible shift t = 0..p-1-k.

    S_t = sum over m of |sum_{i+j=m} chi(t+i) chi(t+j)|, i, j in 1..k, i.e. the
    l1 norm of the autoconvolution of (chi(t+1), ..., chi(t+k)).
    """
    if not 1 <= k <= p - 1:
        raise KTooLarge(f"need 1 <= k < p, got k={k}, p={p}")
    chi = np.array(legendre_table(p), dtype=np.int64)
    n_t = p - k
    window = chi[np.arange(n_t)[:, None] + np.arange(1, k + 1)[None, :]]
    out = np.zeros(n_t, dtype=np.int64)
    for m in range(2, 2 * k + 1):
        acc = np.zeros(n_t, dtype=np.int64)
        for i in range(max(1, m - k), min(k, m - 1) + 1):
            acc += window[:, i - 1] * window[:, m - i - 1]
        out += np.abs(acc)
    return out


def character_sum_S(p: int, k: int, t: int) -> int:
    if not 0 <= t <= p - 1 - k:
        raise ValueError(f"t must lie in [0, {p - 1 - k}]")
    return int(character_sums(p, k)[t])


class ParabolaUnion(NamedTuple):
    sidon_set: SidonSet
    achieved_g: int


def build_parabola_union(p: int, k: int, t: int | None = None) -> ParabolaUnion:
    """Union of the parabolas A_u, u = t+1..t+k, with exact max r.

    ``t=None`` picks the smallest t minimising S_t.  For small p the nominal cap
    floor(k^2 + 2k^(3/2)) may fail; the set is still returned with the cap it
    actually achieves.
    """
    if not is_prime(p) or p % 2 == 0:
        raise ValueError(f"{p} is not an odd prime")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= p:
        raise KTooLarge(f"k = {k} must be smaller than p = {p}")
    sums = character_sums(p, k)
    if t is None:
        t = int(np.argmin(sums))
    elif not 0 <= t <= p - 1 - k:
        raise ValueError(f"t must lie in [0, {p - 1 - k}]")
    pts = set()
    for u in range(t + 1, t + k + 1):
        inv = mod_inverse(u, p)
        pts.update((x, x * x * inv % p) for x in range(p))
    nominal = target_g(k)
    prov = {"construction": "parabola_union", "p": p, "k": k, "t": t, "S_t": int(sums[t]), "nominal_g": nominal}
    A = SidonSet.build(GroupSpec.product(p), pts, provenance=prov)
    prof = rep_profile_direct(A)
    achieved = prof.max_r
    A = A.verify(g=nominal if achieved <= nominal else achieved, profile=prof)
    return ParabolaUnion(A, achieved)


def project_to_cyclic(A: SidonSet, s: int) -> SidonSet:
    """{a + c p + b s p : (a, b) in A, 0 <= c < s} inside Z_{p^2 s}."""
    if A.group.kind is not GroupKind.PRODUCT:
        raise ValueError("projection needs a set in Z_p x Z_p")
    if s < 1:
        raise ValueError("s must be >= 1")
    p = A.group.param
    q = p * p * s
    g = A.achieved_g if A.achieved_g is not None else rep_profile(A).max_r
    pts = [a + c * p + b * s * p for (a, b) in A for c in range(s)]
    prov = {"construction": "projection", "p": p, "s": s, "source_g": g, "source": dict(A.provenance)}
    return SidonSet.build(GroupSpec.cyclic(q), pts, provenance=prov).verify(g=g * (s + 1))


class CyclicGSidon(NamedTuple):
    sidon_set: SidonSet
    nominal_cap: int


def build_cyclic_gsidon(k: int, s: int, p: int) -> CyclicGSidon:
    """(kp - k + 1) s elements in Z_{p^2 s}; nominal cap floor(k^2+2k^(3/2)) (s+1).

    The returned set claims the nominal cap when the exact profile confirms it,
    otherwise the exactly achieved maximum.
    """
    if p <= k:
        raise KTooLarge(f"need p > k, got p={p}, k={k}")
    union, _ = build_parabola_union(p, k)
    projected = project_to_cyclic(union, s)
    nominal = target_g(k) * (s + 1)
    cap = nominal if projected.achieved_g <= nominal else projected.achieved_g
    out = projected.verify(g=cap)
    out.provenance.update({"construction": "cyclic", "k": k, "nominal_g": nominal})
    return CyclicGSidon(out, nominal)


def bose_sidon_baseline(p: int) -> SidonSet:
    """Bose's Sidon set {a : theta^a - theta in GF(p)} mod p^2 - 1.

    GF(p^2) is GF(p)[x]/(x^2 - nr) for a quadratic non-residue nr; theta is a
    primitive element.  The result is an unordered 1-Sidon (ordered 2-Sidon) set.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    chi = legendre_table(p)
    nr = next(a for a in range(2, p) if chi[a] == -1)
    order = p * p - 1

    def mul(x, y):
        return ((x[0] * y[0] + nr * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def power(x, e):
        acc = (1, 0)
        while e:
            if e & 1:
                acc = mul(acc, x)
            x = mul(x, x)
            e >>= 1
        return acc

    factors = {d for d in primes_between(2, int(math.isqrt(order)) + 1) if order % d == 0}
    rest = order
    for d in factors:
        while rest % d == 0:
            rest //= d
    if rest > 1:
        factors.add(rest)
    theta = next(
        (a, b)
        for a in range(p)
        for b in range(1, p)
        if all(power((a, b), order // d) != (1, 0) for d in factors)
    )
    elems, x = [], (1, 0)
    for e in range(order):
        if x[1] == theta[1]:
            elems.append(e)
        x = mul(x, theta)
    prov = {"construction": "bose", "p": p}
    return SidonSet.build(GroupSpec.cyclic(order), elems, flavor=Flavor.UNORDERED, provenance=prov).verify(g=1)


@dataclass(frozen=True)
class PastingParams:
    A_int: SidonSet
    C: SidonSet
    g1: int
    g2: int

    def __post_init__(self):
        if self.A_int.group.kind is not GroupKind.INTERVAL:
            raise ValueError("A_int must be a set of integers")
        if self.C.group.kind is not GroupKind.CYCLIC:
            raise ValueError("C must be a set of residues")
        if not len(self.A_int) or min(self.A_int) != 0:
            raise NormalizationError("the integer pattern must start at 0")


def paste(params: PastingParams) -> SidonSet:
    """B = union of (C + q a_i), a g1 g2-Sidon set in [1, q (a_k + 1)].

    Residues of C are lifted into [1, q] (0 becomes q), so the translates are
    disjoint and |B| = |A_int| |C|.
    """
    A, C, g1, g2 = params.A_int, params.C, params.g1, params.g2
    if not A.verify(g=g1, flavor=Flavor.ORDERED).verified:
        raise ValueError(f"A_int is not {g1}-Sidon")
    if not C.verify(g=g2, flavor=Flavor.ORDERED).verified:
        raise ValueError(f"C is not {g2}-Sidon mod {C.group.param}")
    q = C.group.param
    lifted = [c if c else q for c in C]
    top = q * (max(A) + 1)
    pts = [c + q * a for a in A for c in lifted]
    prov = {
        "construction": "paste",
        "q": q,
        "g1": g1,
        "g2": g2,
        "pattern": list(A),
        "cyclic": dict(C.provenance),
    }
    B = SidonSet.build(GroupSpec.interval(top), pts, claimed_g=g1 * g2, provenance=prov)
    if top <= DESK_VERIFY_LIMIT:
        B = B.verify()
    return B


# --- assembly -------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _bose_cached(p: int) -> SidonSet:
    return bose_sidon_baseline(p).verify(g=2, flavor=Flavor.ORDERED)


@functools.lru_cache(maxsize=None)
def _cyclic_cached(k: int, s: int, p: int) -> SidonSet:
    C = build_cyclic_gsidon(k, s, p).sidon_set
    return C.verify(g=C.achieved_g)


@functools.lru_cache(maxsize=None)
def _exact_pattern(n: int, g1: int) -> SidonSet:
    return best_gsidon_from_zero(n, g1)


def integer_gsidon(n: int, g1: int, eps: float = 0.3, seed: int = 0) -> SidonSet:
    """A g1-Sidon subset of {0..n} containing 0.

    Exact optimum when n is within the search ceiling; otherwise the larger of a
    greedy scan and a greedily repaired random sample from the probabilistic model.
    """
    if n <= default_beta_ceiling(g1) - 1:
        return _exact_pattern(n, g1)
    group = GroupSpec.interval(n)
    empty = np.empty(0, dtype=np.int64)
    scan = np.arange(n + 1, dtype=np.int64)
    best = _search.greedy_gsidon(scan, 2 * n + 1, 0, g1, 2, 1, empty)
    try:
        sampled = _sampled_candidates(n, eps, seed)
    except SidonError:  # model parameters invalid at this n; the plain scan stands
        sampled = np.empty(0, dtype=np.int64)
    if sampled.size:
        order = np.concatenate([sampled - sampled.min(), scan])
        cand = _search.greedy_gsidon(order, 2 * n + 1, 0, g1, 2, 1, empty)
        if cand.size > best.size:
            best = cand
    A = SidonSet.build(group, best.tolist(), claimed_g=g1).verify()
    if min(A) != 0:
        A = SidonSet.build(group, [a - min(A) for a in A], claimed_g=g1).verify()
    return A


def _sampled_candidates(n: int, eps: float, seed: int) -> np.ndarray:
    from .continuum import DiscretizationParams, discretize, inverse_sqrt_profile, make_prob_model, sample_random_set

    f = inverse_sqrt_profile(4096)
    disc = discretize(f, DiscretizationParams(n=n, eps=eps))
    model = make_prob_model(disc.coeffs, n, 1 / 3, disc.integral, seed=seed)
    return np.array(sample_random_set(model).elements, dtype=np.int64)


class _Option(NamedTuple):
    size: int
    g1: int
    g2: int
    q: int
    n: int
    C: SidonSet
    label: str


def _cyclic_menu(g: int, N: int, max_k: int, max_s: int):
    """(g2, C) candidates with exactly verified caps g2 <= g and q <= N."""
    yield 1, SidonSet.build(GroupSpec.cyclic(1), [0], claimed_g=1).verify(), "trivial"
    if g < 2:
        return
    for p in primes_between(3, math.isqrt(N + 1)):
        yield 2, _bose_cached(p), f"bose(p={p})"
    for k in range(1, max_k + 1):
        for s in range(1, max_s + 1):
            if target_g(k) * (s + 1) > 2 * g:
                continue
            for p in primes_between(k + 1, math.isqrt(N // s)):
                if p == 2:
                    continue
                C = _cyclic_cached(k, s, p)
                if C.achieved_g <= g:
                    yield C.achieved_g, C, f"cyclic(k={k},s={s},p={p})"


def assemble_integer_gsidon(
    g: int, N: int, eps: float = 0.3, seed: int = 0, max_k: int = 4, max_s: int = 3
) -> SidonSet:
    """Best pasted g1 g2-Sidon set in [1, N] over a finite menu, g1 g2 <= g.

    Cyclic factors come from Bose sets and projected parabola unions, each
    with its exactly verified cap g2; for every factor the integer pattern is
    the best available g1-Sidon set in {0..N//q - 1} with g1 = g // g2.  The
    option with the most elements wins (ties: smaller footprint).
    """
    if g < 1 or N < 1:
        raise InfeasibleParameters("need g >= 1 and N >= 1")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    best: _Option | None = None
    for g2, C, label in _cyclic_menu(g, N, max_k, max_s):
        q = C.group.param
        m = N // q
        if m < 1:
            continue
        g1 = g // g2
        n = m - 1
        if q == 1 and n > default_beta_ceiling(g1) - 1:
            continue  # bare integer sets beyond exact reach are dominated by pasting
        A = integer_gsidon(n, g1, eps, seed)
        opt = _Option(len(A) * len(C), g1, g2, q, n, C, label)
        if best is None or (opt.size, -opt.q * (opt.n + 1)) > (best.size, -best.q * (best.n + 1)):
            best = opt
    if best is None:
        raise InfeasibleParameters(f"no (g1, g2, q) decomposition fits g={g}, N={N}")
    A = integer_gsidon(best.n, best.g1, eps, seed)
    B = paste(PastingParams(A, best.C, best.g1, best.g2))
    B.provenance.update({"construction": "assemble", "g": g, "N": N, "eps": eps, "seed": seed, "choice": best.label})
    B = SidonSet.build(GroupSpec.interval(N), B.elements, claimed_g=g, provenance=B.provenance)
    return B.verify() if N <= DESK_VERIFY_LIMIT else B
