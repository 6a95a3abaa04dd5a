"""Design-evaluation criteria.

Everything here works on the model matrix X (N x p): information matrix
M = X'X, leverages / prediction variances d(f) = f' M^{-1} f, G-efficiency
100 p / (N max d), determinant criteria, per-term standard errors and
multicollinearity R^2, two-sided t-test power, and Monte Carlo fraction-of-
design-space (FDS) curves.

Prediction variances are reported unscaled (d = f' M^{-1} f); the N-scaled
variant N*d is emitted alongside, clearly labeled.  Leverage-based criteria
are invariant to any invertible column recoding of X, so they do not depend
on whether amounts are expressed in unit or physical scales.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg, stats

from .core import Design
from .errors import (
    ConstantColumn,
    MissingAmount,
    NoResidualDf,
    SingularInformation,
)
from .models import ModelMatrix, ModelSpec, coded_model_matrix, model_matrix
from .oofa import pwo_pairs

__all__ = [
    "information_matrix",
    "leverages",
    "prediction_variance",
    "g_efficiency",
    "d_criteria",
    "std_errors",
    "r2_multicollinearity",
    "power",
    "ContinuousAmounts",
    "DiscreteAmounts",
    "FdsCurve",
    "fds_curve",
    "TermStats",
    "EvalReport",
    "evaluate_design",
]

RCOND_FLOOR = 1e-10
_FDS_CHUNK = 8192


def _as_array(X) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(X, ModelMatrix):
        return X.X, X.col_labels
    arr = np.asarray(X, dtype=float)
    return arr, tuple(str(j) for j in range(arr.shape[1]))


def information_matrix(X) -> np.ndarray:
    """M = X'X, symmetric positive semidefinite."""
    arr, _ = _as_array(X)
    return arr.T @ arr


class _Factor:
    """Cholesky factor of X'X with a reciprocal-condition gate.

    The matrix is equilibrated (scaled to unit diagonal) before both the
    condition check and the solves, so the gate and the numerics do not
    depend on column units; a reciprocal condition below 1e-10 on the
    equilibrated matrix raises SingularInformation naming the columns that
    load on the near-null space, rather than returning noise.
    """

    def __init__(self, X):
        arr, labels = _as_array(X)
        M = arr.T @ arr
        diag = M.diagonal()
        if np.any(diag <= 0):
            dead = [labels[j] for j in np.nonzero(diag <= 0)[0]]
            raise SingularInformation(f"columns are identically zero: {dead}")
        scale = np.sqrt(diag)
        C = M / np.outer(scale, scale)
        w, V = np.linalg.eigh(C)
        rcond = w[0] / w[-1] if w[-1] > 0 else 0.0
        if not np.isfinite(rcond) or rcond < RCOND_FLOOR:
            mass = np.abs(V[:, w < w[-1] * RCOND_FLOOR]).max(axis=1)
            suspects = [labels[j] for j in np.nonzero(mass > 0.5 * mass.max())[0]]
            raise SingularInformation(
                f"information matrix is singular at working precision "
                f"(rcond={rcond:.2e}); near-null-space columns include {suspects}"
            )
        self.X = arr
        self.labels = labels
        self.M = M
        self.rcond = float(rcond)
        self._scale = scale
        self._cho = linalg.cho_factor(C, lower=True)

    def pv(self, F: np.ndarray) -> np.ndarray:
        """d_i = f_i' M^{-1} f_i for each row f_i of F, by solving."""
        F = np.atleast_2d(np.asarray(F, dtype=float)) / self._scale
        S = linalg.cho_solve(self._cho, F.T)
        return np.einsum("ij,ji->i", F, S)

    def inverse_diag(self) -> np.ndarray:
        p = self.M.shape[0]
        inv_c = linalg.cho_solve(self._cho, np.eye(p)).diagonal()
        return inv_c / self._scale**2


def leverages(X) -> np.ndarray:
    """Per-run prediction variances d_i = x_i' (X'X)^{-1} x_i; they sum to p."""
    fac = _Factor(X)
    return fac.pv(fac.X)


def prediction_variance(X, f) -> float:
    """Unscaled prediction variance d = f' (X'X)^{-1} f at a model vector f."""
    return float(_Factor(X).pv(np.asarray(f, dtype=float))[0])


def g_efficiency(p: int, n: int, max_pv: float) -> float:
    """100 p / (N max d); equals 100 exactly when max d is p/N."""
    return 100.0 * p / (n * max_pv)


def d_criteria(X) -> dict:
    """Determinant criteria from a stable factorization.

    Both common run-count scalings are reported so a convention stated
    without a formula can be identified empirically:
      det, log_det          |X'X| and its log
      d_eff_per_param       |X'X|^(1/p)
      per_run_scaled        |X'X / N|^(1/p)
      n_scaled_inverse      N * |X'X|^(-1/p)
    """
    arr, _labels = _as_array(X)
    n, p = arr.shape
    M = arr.T @ arr
    sign, logdet = np.linalg.slogdet(M)
    if sign <= 0:
        raise SingularInformation("information matrix has nonpositive determinant")
    per_param = math.exp(logdet / p)
    return {
        "det": math.exp(logdet) if logdet < 700 else float("inf"),
        "log_det": float(logdet),
        "d_eff_per_param": per_param,
        "per_run_scaled": per_param / n,
        "n_scaled_inverse": n / per_param,
    }


def std_errors(X) -> np.ndarray:
    """sqrt of the diagonal of (X'X)^{-1}: per-term standard errors at unit
    error variance."""
    return np.sqrt(_Factor(X).inverse_diag())


def r2_multicollinearity(X, j: int) -> float:
    """R^2 of column j regressed on all other columns.

    Residual sum of squares comes from the least-squares projection onto
    the other columns; the total sum of squares is taken about the column
    mean.  Invariant under positive diagonal rescaling of the columns.
    """
    arr, labels = _as_array(X)
    if arr.shape[1] < 2:
        raise ConstantColumn("need at least two columns")
    target = arr[:, j]
    sst = float(np.sum((target - target.mean()) ** 2))
    if sst == 0.0:
        raise ConstantColumn(f"column {labels[j]} is constant")
    others = np.delete(arr, j, axis=1)
    _, sse, _, _ = np.linalg.lstsq(others, target, rcond=None)
    if sse.size == 0:
        resid = target - others @ np.linalg.lstsq(others, target, rcond=None)[0]
        sse_val = float(resid @ resid)
    else:
        sse_val = float(sse[0])
    return 1.0 - sse_val / sst


def _nct_two_sided(delta: float, df: int, alpha: float) -> float:
    if delta == 0.0:
        # the central case is exact by construction
        return alpha
    tcrit = stats.t.ppf(1.0 - alpha / 2.0, df)
    return float(1.0 - stats.nct.cdf(tcrit, df, delta) + stats.nct.cdf(-tcrit, df, delta))


def power(X, j: int, signal_sd: float, alpha: float = 0.05, *, signal_scale: float = 0.5) -> float:
    """Two-sided t-test power for coefficient j.

    The signal "k standard deviations" is read as a +-k/2 half-range, so the
    noncentrality is delta = (signal_scale * k) / SE_j with signal_scale
    defaulting to 0.5; the residual degrees of freedom are N - p.  The
    default convention reproduces the reference designs' documented power
    columns for linear, sign, and interaction terms.
    """
    arr, _ = _as_array(X)
    n, p = arr.shape
    df = n - p
    if df < 1:
        raise NoResidualDf(f"N - p = {df}; no residual degrees of freedom")
    se = std_errors(X)[j]
    delta = signal_scale * signal_sd / se
    return _nct_two_sided(delta, df, alpha)


def nct_power_oracle(delta: float, df: int, alpha: float) -> float:
    """Numeric-integration reference for the two-sided noncentral-t power.

    Integrates the noncentral-t density directly; used to pin the library
    routine to 1e-6 absolute accuracy in tests.
    """
    tcrit = stats.t.ppf(1.0 - alpha / 2.0, df)

    def density(x):
        return stats.nct.pdf(x, df, delta)

    upper, _ = integrate.quad(density, tcrit, np.inf, limit=200)
    lower, _ = integrate.quad(density, -np.inf, -tcrit, limit=200)
    return float(upper + lower)


# ---------------------------------------------------------------------------
# FDS sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuousAmounts:
    """Sample the total amount uniformly on [lo, hi]."""

    lo: float
    hi: float


@dataclass(frozen=True)
class DiscreteAmounts:
    """Sample the total amount uniformly over a fixed level set."""

    levels: tuple[float, ...]


def _default_policy(design: Design) -> ContinuousAmounts:
    levels = [float(a) for a in design.amount_levels]
    if not levels:
        raise MissingAmount("design carries no amount levels to define a sampling range")
    return ContinuousAmounts(lo=min(levels), hi=max(levels))


def _sample_chunk(seed: int, index: int, n: int, m: int, policy, sign_policy: str):
    rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
    # exponential spacings: normalized iid exponentials are uniform on the simplex
    e = rng.standard_exponential((n, m))
    x = e / e.sum(axis=1, keepdims=True)
    keys = rng.random((n, m))
    if sign_policy == "continuous":
        signs = rng.uniform(-1.0, 1.0, (n, m * (m - 1) // 2))
    else:
        signs = None
    if isinstance(policy, DiscreteAmounts):
        levels = np.asarray(policy.levels, dtype=float)
        amounts = levels[rng.integers(0, len(levels), n)]
    else:
        amounts = rng.uniform(policy.lo, policy.hi, n)
    return x, keys, signs, amounts


def _rows_from_samples(spec: ModelSpec, x, keys, signs, amounts) -> np.ndarray:
    n = x.shape[0]
    comps = x * amounts[:, None] if spec.kind.uses_amounts else x
    pos = np.argsort(np.argsort(keys, axis=1), axis=1)
    pair_index = {pair: i for i, pair in enumerate(pwo_pairs(spec.m))}
    zcols: dict[tuple[int, int], np.ndarray] = {}

    def zcol(pair):
        if pair not in zcols:
            j, k = pair
            if signs is not None:
                z = signs[:, pair_index[pair]]
            else:
                z = np.where(pos[:, j - 1] < pos[:, k - 1], 1.0, -1.0)
            z = z * (comps[:, j - 1] != 0) * (comps[:, k - 1] != 0)
            zcols[pair] = z
        return zcols[pair]

    cols = []
    for term in spec.terms:
        c = np.ones(n)
        for i, p in term.comp_powers:
            c = c * comps[:, i - 1] ** p
        if term.pwo_pair is not None:
            c = c * zcol(term.pwo_pair)
        if term.amount_power:
            c = c * amounts ** term.amount_power
        cols.append(c)
    return np.column_stack(cols)


@dataclass(frozen=True, eq=False)
class FdsCurve:
    """Sorted prediction variances over a random sample of the design space."""

    variances: np.ndarray
    n_samples: int
    seed: int
    policy: object
    sign_policy: str = "orderings"

    @property
    def fractions(self) -> np.ndarray:
        s = self.n_samples
        return np.arange(1, s + 1) / s

    def fraction_below(self, value: float) -> float:
        """Fraction of sampled space with prediction variance < value."""
        return float(np.searchsorted(self.variances, value, side="left")) / self.n_samples

    def quantile(self, fraction: float) -> float:
        i = min(self.n_samples - 1, max(0, int(math.ceil(fraction * self.n_samples)) - 1))
        return float(self.variances[i])

    def to_text(self) -> str:
        lines = [
            f"# fds seed={self.seed} samples={self.n_samples} "
            f"policy={self.policy} signs={self.sign_policy}",
        ]
        for frac, v in zip(self.fractions, self.variances):
            lines.append(f"{frac:.6f} {v:.10e}")
        return "\n".join(lines) + "\n"


def fds_curve(
    design: Design,
    spec: ModelSpec,
    n_samples: int,
    seed: int,
    amount_policy=None,
    workers: int = 1,
    sign_policy: str = "orderings",
) -> FdsCurve:
    """Monte Carlo FDS curve for a design under a model spec.

    Sampling is uniform over the order-of-addition design space:
    proportions uniform on the simplex by the exponential-spacings method,
    the addition order uniform over the permutations of a full support, and
    the total amount per `amount_policy` (default: continuous between the
    design's smallest and largest levels).  Sampled sign factors are masked
    to zero whenever an involved amount is zero.

    `sign_policy="orderings"` (the default) realizes the sign factors from
    a random addition order, so they are +-1 and transitive.
    `sign_policy="continuous"` instead draws each sign factor uniformly
    from [-1, 1] the way generic DOE software treats numeric factors; that
    relaxed space is the one on which this design family's documented
    majority-below-the-design-maximum claims hold.

    Samples are drawn in fixed-size chunks with counter-based seeds, so the
    curve is bit-identical for a given (seed, n_samples, policies) tuple no
    matter how many workers are used.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    if sign_policy not in ("orderings", "continuous"):
        raise ValueError(f"sign_policy must be 'orderings' or 'continuous', got {sign_policy!r}")
    policy = amount_policy if amount_policy is not None else _default_policy(design)
    fac = _Factor(model_matrix(design, spec))

    n_chunks = (n_samples + _FDS_CHUNK - 1) // _FDS_CHUNK

    def run_chunk(index: int) -> np.ndarray:
        count = min(_FDS_CHUNK, n_samples - index * _FDS_CHUNK)
        x, keys, signs, amounts = _sample_chunk(seed, index, count, spec.m, policy, sign_policy)
        F = _rows_from_samples(spec, x, keys, signs, amounts)
        return fac.pv(F)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(n_chunks)))
    else:
        parts = [run_chunk(i) for i in range(n_chunks)]
    variances = np.sort(np.concatenate(parts))
    return FdsCurve(
        variances=variances,
        n_samples=n_samples,
        seed=seed,
        policy=policy,
        sign_policy=sign_policy,
    )


# ---------------------------------------------------------------------------
# report bundle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermStats:
    label: str
    se: float
    r2: float
    power: float


@dataclass(frozen=True, eq=False)
class EvalReport:
    n_runs: int
    n_params: int
    max_pv: float
    avg_pv: float
    max_pv_n_scaled: float
    g_efficiency_pct: float
    d_criteria: dict
    rcond: float
    coding: str
    signal_sd: float
    alpha: float
    terms: tuple[TermStats, ...]

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "n_params": self.n_params,
            "max_pv": self.max_pv,
            "avg_pv": self.avg_pv,
            "max_pv_n_scaled": self.max_pv_n_scaled,
            "g_efficiency_pct": self.g_efficiency_pct,
            "d_criteria": dict(self.d_criteria),
            "rcond": self.rcond,
            "coding": self.coding,
            "signal_sd": self.signal_sd,
            "alpha": self.alpha,
            "terms": [
                {"label": t.label, "se": t.se, "r2": t.r2, "power": t.power}
                for t in self.terms
            ],
        }


def evaluate_design(
    design: Design,
    spec: ModelSpec,
    signal_sd: float = 2.0,
    alpha: float = 0.05,
    *,
    coding: str = "coded",
    signal_scale: float = 0.5,
) -> EvalReport:
    """Full criteria bundle for a design under a model spec.

    Leverage-based quantities (max/avg prediction variance, G-efficiency)
    and the determinant of the information matrix do not depend on the
    column coding.  Per-term standard errors, multicollinearity R^2, and
    power do: `coding="coded"` (the default) centers and scales numeric
    amount factors to [-1, 1] before building terms, which is the
    convention under which the bundled reference designs' documented
    per-term columns reproduce; `coding="raw"` uses the design's own units.
    Standard errors assume unit error variance.
    """
    if coding not in ("coded", "raw"):
        raise ValueError(f"coding must be 'coded' or 'raw', got {coding!r}")
    mm = model_matrix(design, spec)
    fac = _Factor(mm)
    n, p = mm.X.shape
    lev = fac.pv(mm.X)
    max_pv = float(lev.max())
    avg_pv = float(lev.mean())
    df = n - p
    term_mm = coded_model_matrix(design, spec) if coding == "coded" else mm
    term_fac = _Factor(term_mm)
    se = np.sqrt(term_fac.inverse_diag())
    term_stats = []
    for j, label in enumerate(term_mm.col_labels):
        try:
            r2 = r2_multicollinearity(term_mm.X, j)
        except ConstantColumn:
            r2 = float("nan")
        if df >= 1:
            pw = _nct_two_sided(signal_scale * signal_sd / se[j], df, alpha)
        else:
            pw = float("nan")
        term_stats.append(TermStats(label=label, se=float(se[j]), r2=r2, power=pw))
    return EvalReport(
        n_runs=n,
        n_params=p,
        max_pv=max_pv,
        avg_pv=avg_pv,
        max_pv_n_scaled=max_pv * n,
        g_efficiency_pct=g_efficiency(p, n, max_pv),
        d_criteria=d_criteria(term_mm.X),
        rcond=fac.rcond,
        coding=coding,
        signal_sd=signal_sd,
        alpha=alpha,
        terms=tuple(term_stats),
    )
