"""Reference limit laws, closed-form constants, and goodness-of-fit tests."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import mpmath
import numpy as np
from scipy import special, stats

# ---------------------------------------------------------------------------
# reference laws
# ---------------------------------------------------------------------------


class ReferenceLaw:
    """A law on the real line with an exact sampler and a closed-form CDF."""

    atoms: tuple[float, ...] = ()

    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def cdf_left(self, x):
        """``P(X < x)``; differs from ``cdf`` only at atoms."""
        return self.cdf(x)

    @staticmethod
    def _positive(**params):
        for name, value in params.items():
            if not value > 0 or not math.isfinite(value):
                raise ValueError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class Exponential(ReferenceLaw):
    rate: float = 1.0

    def __post_init__(self):
        self._positive(rate=self.rate)

    def sample(self, rng, size=None):
        return rng.exponential(1.0 / self.rate, size)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0)), 0.0)


@dataclass(frozen=True)
class TruncatedExpWithAtom(ReferenceLaw):
    """Law of ``min(Exp(c), 1)``: an atom of mass ``exp(-c)`` at 1."""

    c: float = 1.0
    atoms = (1.0,)

    def __post_init__(self):
        self._positive(c=self.c)

    def sample(self, rng, size=None):
        return np.minimum(rng.exponential(1.0 / self.c, size), 1.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        inner = -np.expm1(-self.c * np.clip(x, 0, 1))
        return np.where(x >= 1, 1.0, np.where(x > 0, inner, 0.0))

    def cdf_left(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 1, 1.0, np.where(x > 0, -np.expm1(-self.c * np.clip(x, 0, 1)), 0.0))


@dataclass(frozen=True)
class Beta(ReferenceLaw):
    """Beta(k, 1): density ``k x^(k-1)`` on [0, 1]."""

    k: float = 1.0

    def __post_init__(self):
        self._positive(k=self.k)

    def sample(self, rng, size=None):
        return rng.random(size) ** (1.0 / self.k)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0) ** self.k


@dataclass(frozen=True)
class Gamma(ReferenceLaw):
    """Gamma with shape ``j`` and rate ``c`` (sum of j Exp(c))."""

    j: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        self._positive(j=self.j, c=self.c)

    def sample(self, rng, size=None):
        return rng.gamma(self.j, 1.0 / self.c, size)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return special.gammainc(self.j, self.c * np.maximum(x, 0.0))


@dataclass(frozen=True)
class ConditionedExp(ReferenceLaw):
    """Exp(rate) conditioned on being smaller than 1."""

    rate: float = 1.0

    def __post_init__(self):
        self._positive(rate=self.rate)

    def sample(self, rng, size=None):
        u = rng.random(size)
        return -np.log1p(u * np.expm1(-self.rate)) / self.rate

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        return np.expm1(-self.rate * x) / np.expm1(-self.rate)


def sample_reference(law: ReferenceLaw, rng: np.random.Generator, size=None):
    return law.sample(rng, size)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-12, max_depth: int = 60) -> float:
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1))

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def moment_eps_min_one(c: float, k: int) -> float:
    """``E[min(Exp(c), 1)^k] = exp(-c) + int_0^1 c exp(-c x) x^k dx``."""
    if not c > 0 or k < 1:
        raise ValueError("need c > 0 and k >= 1")
    return math.exp(-c) + adaptive_simpson(lambda x: c * math.exp(-c * x) * x ** k, 0.0, 1.0)


def q_j(c: float, j: int, *, dps: int = 50) -> float:
    """``E[prod_{i<=j} (1 - exp(-gamma_i))]`` for a Poisson(c) arrival sequence ``gamma``.

    Expands the product and sums the signed terms by dynamic programming over
    (step, picks still to place); the alternating sum cancels heavily, so it is
    carried out with ``dps`` decimal digits.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    if j < 0:
        raise ValueError("j must be >= 0")
    if j == 0:
        return 1.0
    with mpmath.workdps(dps):
        cm = mpmath.mpf(c)
        w = [mpmath.mpf(1)] + [cm / (cm + r) for r in range(1, j + 1)]
        state = [mpmath.mpf(1)] * (j + 1)
        for _ in range(j):
            nxt = [mpmath.mpf(0)] * (j + 1)
            for r in range(j + 1):
                if state[r] == 0:
                    continue
                val = state[r] * w[r]
                nxt[r] += val
                if r > 0:
                    nxt[r - 1] -= val
            state = nxt
        return float(state[0])


def root_fire_probabilities(c: float, jmax: int) -> np.ndarray:
    """Limit probabilities that the root burns with fire ``j = 1..jmax``: ``q_{j-1} - q_j``."""
    q = [q_j(c, j) for j in range(jmax + 1)]
    return np.array([q[j - 1] - q[j] for j in range(1, jmax + 1)])


def sample_gamma_chain(c: float, j: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """``(gamma_1..gamma_j)`` rows: partial sums of i.i.d. Exp(c)."""
    return np.cumsum(rng.exponential(1.0 / c, (size, j)), axis=1)


def q_j_monte_carlo(c: float, j: int, rng: np.random.Generator, chains: int) -> tuple[float, float]:
    """Monte Carlo mean and standard error of ``prod (1 - exp(-gamma_i))``."""
    if j == 0:
        return 1.0, 0.0
    g = sample_gamma_chain(c, j, rng, chains)
    vals = np.prod(-np.expm1(-g), axis=1)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(chains))


def sample_burnt_sequence_limit(c: float, j: int, k: int, rng: np.random.Generator, size: int):
    """Limit vector on the event "root burns with fire j".

    Returns ``(gammas, vec)`` of shape ``(size, k)``: ``vec[:, j-1] = exp(-gamma_j)``
    and ``vec[:, i] = Z_{i+1}`` elsewhere. Chains are drawn by rejection with
    acceptance weight ``exp(-gamma_j) prod_{i<j} (1 - exp(-gamma_i))``.
    """
    if not 1 <= j <= k:
        raise ValueError("need 1 <= j <= k")
    got_g, got_v = [], []
    have = 0
    while have < size:
        batch = max(1024, 2 * (size - have))
        g = sample_gamma_chain(c, k, rng, batch)
        w = np.exp(-g[:, j - 1]) * np.prod(-np.expm1(-g[:, :j - 1]), axis=1)
        keep = rng.random(batch) < w
        g = g[keep]
        u = rng.random(g.shape)
        z = -np.log1p(u * np.expm1(-g)) / g
        z[:, j - 1] = np.exp(-g[:, j - 1])
        got_g.append(g)
        got_v.append(z)
        have += g.shape[0]
    return np.concatenate(got_g)[:size], np.concatenate(got_v)[:size]


# ---------------------------------------------------------------------------
# tests
# ---------------------------------------------------------------------------


@dataclass
class TestReport:
    """Outcome of one statistical check.

    ``kind`` says how ``verdict`` follows from the numbers: ``"p_value"``
    passes when ``p_value > threshold``, ``"max"`` when ``statistic <=
    threshold``, ``"min"`` when ``statistic >= threshold``.
    """

    __test__ = False  # not a pytest class

    name: str
    statistic: float
    threshold: float
    p_value: float | None
    n_samples: int
    kind: str = "max"
    verdict: bool | None = None

    def __post_init__(self):
        derived = self.derive()
        if self.verdict is None:
            self.verdict = derived
        elif self.verdict != derived:
            raise ValueError("verdict does not follow from statistic and threshold")

    def derive(self) -> bool:
        if self.kind == "p_value":
            return bool(self.p_value is not None and self.p_value > self.threshold)
        if self.kind == "max":
            return bool(self.statistic <= self.threshold)
        if self.kind == "min":
            return bool(self.statistic >= self.threshold)
        raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def passed(self) -> bool:
        return bool(self.verdict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = "pass" if self.verdict else "fail"
        for key in ("statistic", "threshold", "p_value"):
            if d[key] is not None and not math.isfinite(d[key]):
                d[key] = str(d[key])
        return d

    def line(self) -> str:
        pv = "" if self.p_value is None else f" p={self.p_value:.4g}"
        cmp = {"p_value": "p >", "max": "<=", "min": ">="}[self.kind]
        return (f"[{'PASS' if self.verdict else 'FAIL'}] {self.name}: stat={self.statistic:.5g}{pv} "
                f"(need {cmp} {self.threshold:g}, N={self.n_samples})")


def ks_statistic(sample, law: ReferenceLaw) -> float:
    """Sup distance between the empirical CDF of ``sample`` and ``law``'s CDF.

    Both one-sided limits are compared at every distinct sample value and at
    the law's atoms, which makes the result exact for laws that are continuous
    away from their atoms.
    """
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.shape[0]
    if n == 0:
        raise ValueError("empty sample")
    pts = np.unique(np.concatenate((x, np.asarray(law.atoms, dtype=np.float64))))
    right = np.searchsorted(x, pts, side="right") / n
    left = np.searchsorted(x, pts, side="left") / n
    d_right = np.abs(right - law.cdf(pts))
    d_left = np.abs(left - law.cdf_left(pts))
    return float(max(d_right.max(), d_left.max()))


def ks_test(name: str, sample, law: ReferenceLaw, ceiling: float) -> TestReport:
    d = ks_statistic(sample, law)
    return TestReport(name, d, ceiling, None, int(np.size(sample)), "max")


def merge_bins(observed, expected_counts, min_expected: float = 5.0):
    """Greedily merge adjacent bins until each merged bin expects at least ``min_expected``."""
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected_counts):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if o_acc or e_acc:
        if exp_out:
            obs_out[-1] += o_acc
            exp_out[-1] += e_acc
        else:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
    return np.array(obs_out, dtype=np.float64), np.array(exp_out, dtype=np.float64)


def chi_square_test(observed, expected, *, name: str = "chi-square", floor: float = 1e-3,
                    min_expected: float = 5.0) -> TestReport:
    """Pearson goodness of fit of counts against cell probabilities."""
    observed = np.asarray(observed, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    if observed.shape != expected.shape or observed.ndim != 1:
        raise ValueError("observed and expected must be 1-d of equal length")
    if np.any(expected < 0) or abs(expected.sum() - 1.0) > 1e-8:
        raise ValueError("expected probabilities must be nonnegative and sum to 1")
    total = observed.sum()
    obs, exp = merge_bins(observed, expected * total, min_expected)
    if obs.shape[0] < 2:
        raise ValueError("fewer than two bins after merging; test is degenerate")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(exp > 0, (obs - exp) ** 2 / exp, np.where(obs > 0, np.inf, 0.0))
    stat = float(terms.sum())
    p = float(stats.chi2.sf(stat, obs.shape[0] - 1)) if math.isfinite(stat) else 0.0
    return TestReport(name, stat, floor, p, int(total), "p_value")


def chi_square_two_sample(counts_a, counts_b, *, name: str = "two-sample chi-square",
                          floor: float = 1e-3, min_expected: float = 5.0) -> TestReport:
    """Homogeneity test of two count vectors over the same categories."""
    a = np.asarray(counts_a, dtype=np.float64)
    b = np.asarray(counts_b, dtype=np.float64)
    pooled = a + b
    # merge on the pooled counts so both rows share the bins
    groups, acc, cur = [], 0.0, []
    for i, c in enumerate(pooled):
        cur.append(i)
        acc += c
        if acc >= 2 * min_expected:
            groups.append(cur)
            cur, acc = [], 0.0
    if cur:
        if groups:
            groups[-1].extend(cur)
        else:
            groups.append(cur)
    table = np.array([[a[g].sum() for g in groups], [b[g].sum() for g in groups]])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        raise ValueError("fewer than two nonempty bins; test is degenerate")
    stat, p, _, _ = stats.chi2_contingency(table, correction=False)
    return TestReport(name, float(stat), floor, float(p), int(table.sum()), "p_value")


def mean_ci(x, z: float = 1.96) -> tuple[float, float, float, float]:
    """``(mean, standard error, low, high)`` for a normal-approximation interval."""
    x = np.asarray(x, dtype=np.float64)
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.shape[0])) if x.shape[0] > 1 else float("nan")
    return m, se, m - z * se, m + z * se


def tolerance_test(name: str, value: float, target: float, tol: float, n: int) -> TestReport:
    return TestReport(name, abs(value - target), tol, None, n, "max")


def agreement_test(name: str, a, b, n_sigma: float = 3.0) -> TestReport:
    """Two Monte Carlo means agree within ``n_sigma`` pooled standard errors.

    The statistic is ``|mean(a) - mean(b)| / sqrt(se_a^2 + se_b^2)``.
    """
    ma, sa, _, _ = mean_ci(a)
    mb, sb, _, _ = mean_ci(b)
    pooled = math.hypot(sa, sb)
    z = abs(ma - mb) / pooled if pooled > 0 else (0.0 if ma == mb else math.inf)
    return TestReport(name, z, n_sigma, None, int(np.size(a) + np.size(b)), "max")
