"""Step functions on [0, 1], their autoconvolutions, and random g-Sidon sets.

A step function with coefficients a_0..a_{N-1} takes the value a_i on
[i/N, (i+1)/N).  Its autoconvolution is piecewise linear with value
``(1/N) sum_i a_i a_{j-1-i}`` at the breakpoint j/N, so

    ratio(f) = (int f) / sqrt(sup f*f) = sum(a) / (sqrt(N) sqrt(max_j (a*a)_j))

is scale invariant and bounded by the Schinzel-Schmidt constant sigma.

The second half turns a profile into integer sets: ``discretize`` averages f
over windows of width 2L/n, ``make_prob_model`` rescales the averages into
inclusion probabilities, and ``sample_random_set`` draws independent
Bernoulli inclusions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.linalg import convolution_matrix
from scipy.optimize import linprog

from .errors import CertificateError, ProbabilityOverflow, WindowTooLarge, ZeroFunction
from .groups import GroupSpec
from .repfn import SidonSet, rep_profile

SIGMA_UPPER = 1.2525
REL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StepFunction:
    coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=np.float64).ravel()
        if a.size < 1:
            raise ValueError("a step function needs at least one piece")
        if np.any(a < 0) or not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite and nonnegative")
        object.__setattr__(self, "coeffs", a)

    @property
    def N(self) -> int:
        return self.coeffs.size

    @property
    def integral(self) -> float:
        return float(self.coeffs.sum()) / self.N

    def scaled(self, c: float) -> StepFunction:
        return StepFunction(self.coeffs * c)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        """int_0^x f, with x clipped to [0, 1]."""
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        cum = np.concatenate([[0.0], np.cumsum(self.coeffs)]) / self.N
        pos = x * self.N
        i = np.minimum(np.floor(pos).astype(np.int64), self.N - 1)
        return cum[i] + (pos - i) * self.coeffs[i] / self.N


def inverse_sqrt_profile(N: int) -> StepFunction:
    """1/sqrt(pi x) sampled at the midpoints of the N cells.

    Midpoints rather than cell averages: the cell average of the first piece
    is 2 sqrt(N/pi), which makes the first breakpoint of the autoconvolution
    4/pi and pins the ratio at exactly 1 for every N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    x = (np.arange(N) + 0.5) / N
    return StepFunction(1.0 / np.sqrt(np.pi * x))


@dataclass(frozen=True, eq=False)
class Autoconvolution:
    """Breakpoint values of f*f at x_j = j/N, j = 0..2N."""

    x: np.ndarray
    values: np.ndarray

    @property
    def sup(self) -> float:
        return float(self.values.max())

    @property
    def argsup(self) -> float:
        return float(self.x[int(np.argmax(self.values))])

    def __call__(self, t) -> np.ndarray:
        return np.interp(t, self.x, self.values, left=0.0, right=0.0)


def _self_convolve(a: np.ndarray) -> np.ndarray:
    if a.size <= 512:
        return np.convolve(a, a)
    n = 1 << (2 * a.size - 1).bit_length()
    fa = np.fft.rfft(a, n)
    return np.fft.irfft(fa * fa, n)[: 2 * a.size - 1]


def autoconvolution(f: StepFunction) -> Autoconvolution:
    N = f.N
    vals = np.zeros(2 * N + 1)
    vals[1 : 2 * N] = np.maximum(_self_convolve(f.coeffs), 0.0) / N
    return Autoconvolution(np.arange(2 * N + 1) / N, vals)


def poly_ratio(f: StepFunction) -> float:
    total = float(f.coeffs.sum())
    if total <= 0:
        raise ZeroFunction("the step function vanishes identically")
    peak = float(np.max(_self_convolve(f.coeffs)))
    return total / math.sqrt(f.N * peak)


def certified_ratio(f: StepFunction) -> float:
    """poly_ratio with the peak located and evaluated in exact rational arithmetic.

    Every float is an exact dyadic rational, so scaling by a common power of two
    turns the coefficients into integers whose convolution is computed exactly.
    """
    a = f.coeffs
    if a.sum() <= 0:
        raise ZeroFunction("the step function vanishes identically")
    fr = [Fraction(float(v)) for v in a]
    denom = max(x.denominator for x in fr)
    ints = [int(x * denom) for x in fr]
    n = len(ints)
    peak = 0
    for j in range(2 * n - 1):
        lo, hi = max(0, j - n + 1), min(j, n - 1)
        s = sum(ints[i] * ints[j - i] for i in range(lo, hi + 1))
        peak = max(peak, s)
    total = sum(ints)
    # ratio^2 = total^2 / (n peak), evaluated as one correctly rounded division
    return math.sqrt(Fraction(total * total, n * peak))


def normalize_to_unit_peak(f: StepFunction) -> StepFunction:
    """Scale f so that sup f*f = 1."""
    sup = autoconvolution(f).sup
    if sup <= 0:
        raise ZeroFunction("the step function vanishes identically")
    return f.scaled(1.0 / math.sqrt(sup))


def window_integral_check(f: StepFunction) -> float:
    """max over breakpoint pairs r < s of int_r^s f - sqrt(2 (s - r)), for f scaled to sup f*f = 1.

    A nonpositive value means every window obeys the square-root estimate.
    """
    g = normalize_to_unit_peak(f)
    cum = np.concatenate([[0.0], np.cumsum(g.coeffs)]) / g.N
    x = np.arange(g.N + 1) / g.N
    worst = -np.inf
    for i in range(g.N):
        diff = cum[i + 1 :] - cum[i]
        worst = max(worst, float(np.max(diff - np.sqrt(2 * (x[i + 1 :] - x[i])))))
    return worst


@dataclass(frozen=True, eq=False)
class SigmaResult:
    step: StepFunction
    ratio: float
    start_ratio: float
    iterations: int


def _lp_direction(a: np.ndarray) -> np.ndarray | None:
    """Maximise sum(b) subject to (a*b)_j <= max(a*a) and b >= 0."""
    peak = float(np.max(_self_convolve(a)))
    M = convolution_matrix(a / math.sqrt(peak), a.size, mode="full")
    res = linprog(
        -np.ones(a.size),
        A_ub=M,
        b_ub=np.full(M.shape[0], math.sqrt(peak)),
        bounds=(0, None),
        method="highs",
    )
    return res.x if res.status == 0 else None


def _line_search(a: np.ndarray, b: np.ndarray, current: float) -> tuple[float, np.ndarray]:
    best_r, best = current, a
    for lam in np.linspace(0.025, 1.0, 40):
        cand = (1 - lam) * a + lam * b
        r = poly_ratio(StepFunction(cand))
        if r > best_r:
            best_r, best = r, cand
    return best_r, best


def optimize_sigma(N: int, budget: int = 200, seed: int = 0, start: StepFunction | None = None) -> SigmaResult:
    """Ascent on sum(a)/sqrt(N max(a*a)) over nonnegative coefficient vectors.

    Each step solves the linear program for the best b with a*b under the
    current peak and line-searches on (1 - lam) a + lam b, which never decreases
    the ratio.  When a step stalls, the best point is perturbed multiplicatively
    (seeded) and the ascent restarts.  ``budget`` caps the number of LP solves.
    The returned ratio is recomputed by :func:`certified_ratio`.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    f0 = start if start is not None else inverse_sqrt_profile(N)
    if f0.N != N:
        raise ValueError("start profile has the wrong number of pieces")
    start_ratio = poly_ratio(f0)
    if N == 1:
        return SigmaResult(f0, certified_ratio(f0), start_ratio, 0)
    rng = np.random.default_rng(seed)
    best_a = f0.coeffs / f0.coeffs.max()
    best_r = start_ratio
    a, cur = best_a, best_r
    used = 0
    while used < budget:
        b = _lp_direction(a)
        used += 1
        stalled = b is None
        if not stalled:
            new_r, new_a = _line_search(a, b, cur)
            stalled = new_r <= cur * (1 + 1e-12)
            a, cur = new_a / new_a.max(), new_r
        if cur > best_r:
            best_a, best_r = a, cur
        if stalled:
            a = best_a * np.exp(0.05 * rng.standard_normal(N))
            cur = poly_ratio(StepFunction(a))
    step = StepFunction(best_a)
    return SigmaResult(step, certified_ratio(step), start_ratio, used)


# --- discretisation -------------------------------------------------------


@dataclass(frozen=True)
class DiscretizationParams:
    n: int
    eps: float
    alpha: float = 1 / 3

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if not 0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 1 <= self.L <= self.n / 2:
            raise WindowTooLarge(f"window L = {self.L} violates 1 <= L <= n/2 for n = {self.n}")

    @property
    def L(self) -> int:
        return math.ceil(self.n ** (1 - 2 * self.alpha) / (1 - self.eps) ** 2)


@dataclass(frozen=True, eq=False)
class Discretization:
    coeffs: np.ndarray
    params: DiscretizationParams
    integral: float
    scale: float
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c["holds"] for c in self.checks.values())


def _check(value: float, bound: float, upper: bool = True) -> dict:
    slack = REL_TOL * max(1.0, abs(bound))
    holds = value <= bound + slack if upper else value >= bound - slack
    return {"value": float(value), "bound": float(bound), "holds": bool(holds)}


def discretize(f: StepFunction, params: DiscretizationParams) -> Discretization:
    """a_i = (n / 2L) int_{(i-L)/n}^{(i+L)/n} f, i = 0..n, with the conclusions checked.

    f is first rescaled so that sup f*f = 1 (only downwards).  The checks use
    the actual integral of the rescaled f wherever sigma would appear.
    """
    sup = autoconvolution(f).sup
    if sup <= 0:
        raise ZeroFunction("the step function vanishes identically")
    scale = 1.0 / math.sqrt(sup) if sup > 1 else 1.0
    g = f.scaled(scale)
    n, L, eps, alpha = params.n, params.L, params.eps, params.alpha
    i = np.arange(n + 1)
    a = (n / (2 * L)) * (g.cdf((i + L) / n) - g.cdf((i - L) / n))
    integral = g.integral
    total = float(a.sum())
    peak = float(np.max(_self_convolve(a)))
    checks = {
        "cap": _check(float(a.max()), n**alpha * (1 - eps)),
        "mass": _check(total, n * integral * (1 - eps), upper=False),
        "convolution": _check(peak, n * (1 + eps)),
        "window_cap": _check(float(a.max()), math.sqrt(n / L)),
        "edge_mass": _check(total, n * integral - math.sqrt(2 * n * L), upper=False),
        "convolution_window": _check(peak, n * (1 + 1 / (2 * L))),
    }
    return Discretization(a, params, integral, scale, checks)


# --- probabilistic sets ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProbModel:
    probs: np.ndarray
    target_sum: float
    seed: int = 0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if np.any(p < 0) or np.any(p > 1):
            raise ProbabilityOverflow("probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", p)

    @property
    def n(self) -> int:
        return self.probs.size - 1


def make_prob_model(a, n: int, alpha: float, target_integral: float, seed: int = 0) -> ProbModel:
    """p_i = a_i * target_integral * n^(1 - alpha) / sum(a)."""
    a = np.asarray(a, dtype=np.float64)
    if a.size != n + 1:
        raise ValueError("need n + 1 coefficients")
    total = float(a.sum())
    if total <= 0:
        raise ZeroFunction("coefficients sum to zero")
    target = target_integral * n ** (1 - alpha)
    probs = a * (target / total)
    if probs.max() > 1:
        raise ProbabilityOverflow(f"largest probability {probs.max():.4f} exceeds 1")
    return ProbModel(probs, target, seed)


def sample_random_set(model: ProbModel, rng: np.random.Generator | None = None) -> SidonSet:
    rng = rng if rng is not None else np.random.default_rng(model.seed)
    picked = np.flatnonzero(rng.random(model.probs.size) < model.probs)
    return SidonSet(GroupSpec.interval(model.n), tuple(int(x) for x in picked))


def chernoff_bound(expectation: float, delta: float) -> float:
    """2 exp(-min(delta^2/4, delta/2) E) bounds P(|X - E| >= delta E)."""
    if expectation < 0 or delta <= 0:
        raise ValueError("need expectation >= 0 and delta > 0")
    return 2.0 * math.exp(-min(delta * delta / 4, delta / 2) * expectation)


@dataclass
class MonteCarloReport:
    n: int
    eps: float
    trials: int
    seed: int
    size_threshold: float
    r_threshold: float
    expected_size: float
    size_rate: float
    r_rate: float
    success_rate: float
    size_stats: dict
    max_r_stats: dict

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _stats(x: np.ndarray) -> dict:
    return {
        "mean": float(x.mean()),
        "std": float(x.std(ddof=1)) if x.size > 1 else 0.0,
        "min": int(x.min()),
        "max": int(x.max()),
    }


def monte_carlo_check(model: ProbModel, trials: int, eps: float) -> MonteCarloReport:
    """Fraction of sampled sets that are both large and have a small max r.

    Large: |A| >= target_sum (1 - eps).  Small max r:
    r(m) <= n^(1/3) ((1 + eps)/(1 - eps))^3 for every m.
    Trial i draws from the i-th child of SeedSequence(model.seed).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = model.n
    size_thr = model.target_sum * (1 - eps)
    r_thr = n ** (1 / 3) * ((1 + eps) / (1 - eps)) ** 3
    sizes = np.empty(trials, dtype=np.int64)
    maxr = np.empty(trials, dtype=np.int64)
    for t, child in enumerate(np.random.SeedSequence(model.seed).spawn(trials)):
        A = sample_random_set(model, np.random.default_rng(child))
        sizes[t] = len(A)
        maxr[t] = rep_profile(A).max_r
    size_ok = sizes >= size_thr
    r_ok = maxr <= r_thr
    return MonteCarloReport(
        n=n,
        eps=eps,
        trials=trials,
        seed=model.seed,
        size_threshold=size_thr,
        r_threshold=r_thr,
        expected_size=float(model.probs.sum()),
        size_rate=float(size_ok.mean()),
        r_rate=float(r_ok.mean()),
        success_rate=float((size_ok & r_ok).mean()),
        size_stats=_stats(sizes),
        max_r_stats=_stats(maxr),
    )


# --- profile files --------------------------------------------------------


def write_profile_csv(f: StepFunction, path) -> None:
    """Header ``N=<count>`` then one coefficient per line, round-trip exact."""
    lines = [f"N={f.N}"] + [repr(float(v)) for v in f.coeffs]
    Path(path).write_text("\n".join(lines) + "\n")


def read_profile_csv(path) -> StepFunction:
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise CertificateError(f"cannot read profile {path}: {exc}") from exc
    if not lines or not lines[0].startswith("N="):
        raise CertificateError("profile must start with a header line N=<count>")
    try:
        N = int(lines[0][2:])
        coeffs = [float(x) for x in lines[1:]]
    except ValueError as exc:
        raise CertificateError(f"malformed profile: {exc}") from exc
    if len(coeffs) != N:
        raise CertificateError(f"header says N={N} but found {len(coeffs)} coefficients")
    try:
        return StepFunction(np.array(coeffs))
    except ValueError as exc:
        raise CertificateError(str(exc)) from exc
