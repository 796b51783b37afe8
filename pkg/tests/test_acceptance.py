"""The ten acceptance criteria, one test each, at the stated tolerances.

Each test records a one-line PASS/FAIL verdict with its measured runtime; the
lines are printed in the pytest terminal summary (and directly when this file
is run as a script).
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, brute_counts
from sidonforge.bounds import bound_corollaries, bound_integer_classics, exact_alpha, exact_beta
from sidonforge.construct import (
    PastingParams,
    assemble_integer_gsidon,
    build_parabola_union,
    pair_rep_table,
    paste,
    project_to_cyclic,
)
from sidonforge.continuum import (
    SIGMA_UPPER,
    DiscretizationParams,
    discretize,
    inverse_sqrt_profile,
    make_prob_model,
    monte_carlo_check,
    optimize_sigma,
    poly_ratio,
)
from sidonforge.groups import GroupSpec, legendre_table, primes_between
from sidonforge.repfn import SidonSet, rep_profile, rep_profile_direct, rep_profile_fft

SEED = 20240611


def record(n, ok, detail, started, limit=None):
    elapsed = time.perf_counter() - started
    ok = ok and (limit is None or elapsed < limit)
    budget = f" (limit {limit:.0f}s)" if limit else ""
    ACCEPTANCE_LINES.append(f"AC{n:02d} {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.1f}s{budget}]")
    return ok


def test_ac01_parabola_cardinality():
    t0 = time.perf_counter()
    bad = []
    cases = 0
    for p in primes_between(5, 101):
        for k in range(1, min(5, p - 1) + 1):
            cases += 1
            A, _ = build_parabola_union(p, k)
            if len(A) != k * (p - 1) + 1:
                bad.append((p, k, len(A)))
    assert record(1, not bad, f"{cases} (p,k) cases, {len(bad)} wrong sizes", t0, 10), bad


def test_ac02_pair_identity_exhaustive():
    t0 = time.perf_counter()
    violations = 0
    quads = 0
    for p in primes_between(3, 61):
        chi = legendre_table(p)
        for s in range(1, p):
            groups = {1: [], -1: []}
            for u in range(1, p):
                v = (s - u) % p
                if v:
                    groups[chi[u * v % p]].append(pair_rep_table(u, v, p, method="direct"))
            if not groups[1] or not groups[-1]:
                continue
            plus, minus = np.stack(groups[1]), np.stack(groups[-1])
            quads += 2 * len(plus) * len(minus)
            # every plus/minus pair sums to 2 at x iff the extreme pairs do
            lo = plus.min(axis=0) + minus.max(axis=0)
            hi = plus.max(axis=0) + minus.min(axis=0)
            violations += int(np.count_nonzero((lo != 2) | (hi != 2)))
    assert record(2, violations == 0, f"{quads} ordered quadruples, {violations} violating points", t0, 60)


def test_ac03_projection_cap():
    t0 = time.perf_counter()
    cases = [(5, 1, s) for s in (1, 2, 3)] + [(7, 2, s) for s in (1, 2, 3)] + [(11, 2, 2), (13, 3, 2)]
    bad = []
    for p, k, s in cases:
        A, _ = build_parabola_union(p, k)
        g = rep_profile_direct(A).max_r
        B = project_to_cyclic(A, s)
        if len(B) != len(A) * s or rep_profile_direct(B).max_r > g * (s + 1):
            bad.append((p, k, s))
    assert record(3, not bad, f"{len(cases)} instances, {len(bad)} violations", t0), bad


def test_ac04_pasting_cap():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    bad = []
    for _ in range(100):
        q = int(rng.integers(3, 80))
        C = SidonSet.build(GroupSpec.cyclic(q), rng.choice(q, size=int(rng.integers(1, min(q, 12) + 1)), replace=False))
        top = int(rng.integers(0, 40))
        pattern = {0} | set(rng.choice(top + 1, size=int(rng.integers(0, min(top, 8) + 1)), replace=False).tolist())
        A = SidonSet.build(GroupSpec.interval(max(pattern)), pattern)
        g1 = max(brute_counts(A.group, A.elements)[0].values())
        g2 = max(brute_counts(C.group, C.elements)[0].values())
        B = paste(PastingParams(A, C, g1, g2))
        if len(B) != len(A) * len(C) or rep_profile_direct(B).max_r > g1 * g2:
            bad.append((list(A), list(C)))
    assert record(4, not bad, f"100 random instances, {len(bad)} violations", t0), bad


def test_ac05_engine_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 5)
    mismatches = 0
    for make in (GroupSpec.interval, GroupSpec.cyclic):
        for _ in range(100):
            order = int(rng.integers(2, 10_001))
            group = make(order)
            size = int(rng.integers(0, min(group.order, 600) + 1))
            A = SidonSet.build(group, rng.choice(group.order, size=size, replace=False))
            if not rep_profile_fft(A).same_counts(rep_profile_direct(A)):
                mismatches += 1
    assert record(5, mismatches == 0, f"200 sets (interval, cyclic), {mismatches} mismatches", t0)


def test_ac06_bound_consistency():
    t0 = time.perf_counter()
    bad = []
    for q in range(1, 31):
        for g in range(2, 7):
            size, _ = exact_alpha(q, g, prune_with_bounds=False)
            if not size < bound_corollaries(q, g):
                bad.append(("alpha", q, g, size))
    for n in range(1, 41):
        size, _ = exact_beta(n, 2, prune_with_bounds=False)
        if size > bound_integer_classics(n, 2)["lindstrom"]:
            bad.append(("beta", n, size))
    assert record(6, not bad, f"150 alpha + 40 beta instances, {len(bad)} violations", t0, 300), bad


def test_ac07_sigma_pipeline():
    t0 = time.perf_counter()
    start = poly_ratio(inverse_sqrt_profile(10_000))
    target = 2 / math.sqrt(math.pi)
    res = optimize_sigma(256, seed=SEED)
    ok = abs(start - target) <= 0.01 * target and 1.12 <= res.ratio <= SIGMA_UPPER + 1e-4
    detail = f"profile ratio {start:.5f} vs {target:.5f}, optimizer N=256 certified {res.ratio:.5f}"
    assert record(7, ok, detail, t0, 120)


def test_ac08_probabilistic_construction():
    t0 = time.perf_counter()
    n, eps = 10_000, 0.3
    d = discretize(inverse_sqrt_profile(4096), DiscretizationParams(n=n, eps=eps))
    model = make_prob_model(d.coeffs, n, 1 / 3, d.integral, seed=SEED)
    rep = monte_carlo_check(model, 200, eps)
    assert record(8, rep.success_rate >= 0.8, f"success rate {rep.success_rate:.3f} over 200 trials", t0, 300)


LADDER = [(4, 50_000), (8, 50_000), (16, 50_000)]


def test_ac09_density_trend():
    t0 = time.perf_counter()
    dens = []
    ok = True
    for g, N in LADDER:
        B = assemble_integer_gsidon(g, N, eps=0.3, seed=SEED)
        ok &= B.verified and B.achieved_g <= g and 1 <= min(B) and max(B) <= N
        dens.append(len(B) / math.sqrt(g * N))
    ok &= all(a <= b for a, b in zip(dens, dens[1:])) and dens[-1] > 0.5
    detail = "densities " + ", ".join(f"g={g}:{d:.4f}" for (g, _), d in zip(LADDER, dens))
    assert record(9, ok, detail, t0)


def _difference_square_sum(group, idx):
    if group.kind.value == "product":
        p = group.param
        a, b = idx // p, idx % p
        diff = ((a[:, None] - a[None, :]) % p) * p + (b[:, None] - b[None, :]) % p
    elif group.kind.value == "cyclic":
        diff = (idx[:, None] - idx[None, :]) % group.param
    else:
        diff = idx[:, None] - idx[None, :] + group.param
    return int((np.bincount(diff.ravel()).astype(np.int64) ** 2).sum())


def test_ac10_invariant_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 10)
    makers = [GroupSpec.interval, GroupSpec.cyclic, GroupSpec.product]
    failures = 0
    for i in range(1000):
        kind = makers[i % 3]
        if i % 3 == 2:
            param = int(rng.choice(primes_between(3, 29)))
        else:
            param = int(rng.integers(1, 400))
        group = kind(param)
        size = int(rng.integers(0, min(group.order, 60) + 1))
        picks = rng.choice(group.order, size=size, replace=False)
        A = SidonSet.build(group, [group.from_index(int(x)) for x in picks])
        prof = rep_profile(A)
        r, rr, ru = prof.r, prof.r_restricted, prof.r_unordered
        ok = np.array_equal(2 * ru, 2 * r - rr)
        ok &= bool(np.all(rr <= r) and np.all(r <= 2 * ru))
        ok &= int(r.sum()) == len(A) ** 2
        ok &= int((r**2).sum()) == _difference_square_sum(group, A.indices)
        if group.kind.value != "interval" and group.order % 2 == 1:
            ok &= np.array_equal(ru, (r + 1) // 2) and np.array_equal(rr, 2 * (r // 2))
        failures += not ok
    assert record(10, failures == 0, f"1000 random sets, {failures} failing", t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
