"""Model specifications and numeric model matrices.

Eight model families are supported, keyed eq1..eq8:

  eq1/eq2  mixture-amount: linear/quadratic Scheffe blocks in the
           proportions x_i, each block multiplied by a power of the total
           amount A (no intercept; the x_i sum to 1)
  eq3/eq4  component-amount: linear/quadratic polynomial in the actual
           amounts a_i, with an intercept (rows at A = 0 are admissible)
  eq5/eq6  eq1/eq2 plus pairwise-order factors z_jk; eq6 also carries
           component-by-order interactions, reduced for identifiability
  eq7/eq8  eq3/eq4 plus pairwise-order factors; eq8 with reduced
           interactions

The interaction reduction defaults to cyclic pairing: component i keeps
only its interaction with the pair {i, i mod m + 1}, materialized on the
j < k sign column (for m = 3 that is x1z12, x2z23, x3z13).  "keep_all"
retains every membership interaction x_i z_jk with i in {j, k}; a custom
list of (component, pair) entries is also accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import numpy as np

from .core import Design, Kind
from .errors import (
    InvalidDimension,
    KindMismatch,
    MissingAmount,
    MissingPwo,
    RankDeficient,
    UnsupportedReduction,
)
from .oofa import pwo_pairs

__all__ = [
    "ModelKind",
    "Term",
    "ModelSpec",
    "ModelMatrix",
    "OlsFit",
    "build_spec",
    "model_matrix",
    "coded_model_matrix",
    "fit_ols",
]

_AMOUNT_KINDS = frozenset({"eq3", "eq4", "eq7", "eq8"})
_PWO_KINDS = frozenset({"eq5", "eq6", "eq7", "eq8"})


class ModelKind(Enum):
    MA_LIN = "eq1"
    MA_QUAD = "eq2"
    CA_LIN = "eq3"
    CA_QUAD = "eq4"
    OOFA_MA_ADD = "eq5"
    OOFA_MA_FULL = "eq6"
    OOFA_CA_ADD = "eq7"
    OOFA_CA_FULL = "eq8"

    @property
    def uses_amounts(self) -> bool:
        """True for component-amount families (model terms in a_i)."""
        return self.value in _AMOUNT_KINDS

    @property
    def has_pwo(self) -> bool:
        return self.value in _PWO_KINDS

    @classmethod
    def parse(cls, text: "str | ModelKind") -> "ModelKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise UnsupportedReduction(f"unknown model kind {text!r}; expected eq1..eq8")


@dataclass(frozen=True)
class Term:
    """A product of component powers, at most one sign factor, and a power
    of the total amount.  `intercept` terms carry no other factors."""

    intercept: bool = False
    comp_powers: tuple[tuple[int, int], ...] = ()
    pwo_pair: tuple[int, int] | None = None
    amount_power: int = 0

    def label(self, comp_symbol: str) -> str:
        if self.intercept:
            return "1"
        parts = []
        for i, p in self.comp_powers:
            # squares render subscript-style: a1^2 is "a11"
            parts.append(f"{comp_symbol}{i}" if p == 1 else f"{comp_symbol}{i}{i}")
        if self.pwo_pair is not None:
            j, k = self.pwo_pair
            parts.append(f"z{j}{k}")
        if self.amount_power == 1:
            parts.append("A")
        elif self.amount_power >= 2:
            parts.append(f"A^{self.amount_power}")
        return "".join(parts)


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    m: int
    terms: tuple[Term, ...]

    @property
    def p(self) -> int:
        return len(self.terms)

    @property
    def comp_symbol(self) -> str:
        return "a" if self.kind.uses_amounts else "x"

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(term.label(self.comp_symbol) for term in self.terms)


def _resolve_reduction(reduction, m: int) -> tuple[tuple[int, tuple[int, int]], ...]:
    if reduction is None or reduction == "cyclic":
        return tuple((i, tuple(sorted((i, i % m + 1)))) for i in range(1, m + 1))
    if reduction == "keep_all":
        out = []
        for i in range(1, m + 1):
            for j, k in pwo_pairs(m):
                if i in (j, k):
                    out.append((i, (j, k)))
        return tuple(out)
    if isinstance(reduction, str):
        raise UnsupportedReduction(f"unknown reduction rule {reduction!r}")
    out = []
    seen = set()
    for entry in reduction:
        i, pair = entry
        i = int(i)
        j, k = sorted(int(c) for c in pair)
        if not (1 <= j < k <= m) or not (1 <= i <= m):
            raise UnsupportedReduction(f"interaction ({i}, ({j},{k})) out of range for m={m}")
        if i not in (j, k):
            raise UnsupportedReduction(
                f"component {i} must belong to its pair ({j},{k})"
            )
        if (i, (j, k)) in seen:
            raise UnsupportedReduction(f"duplicate interaction ({i}, ({j},{k}))")
        seen.add((i, (j, k)))
        out.append((i, (j, k)))
    return tuple(out)


def _linear(m, t=0):
    return [Term(comp_powers=((i, 1),), amount_power=t) for i in range(1, m + 1)]


def _squares(m, t=0):
    return [Term(comp_powers=((i, 2),), amount_power=t) for i in range(1, m + 1)]


def _crosses(m, t=0):
    return [
        Term(comp_powers=((i, 1), (j, 1)), amount_power=t) for i, j in pwo_pairs(m)
    ]


def _signs(m, t=0):
    return [Term(pwo_pair=pair, amount_power=t) for pair in pwo_pairs(m)]


def _interactions(pairs, t=0):
    return [
        Term(comp_powers=((i, 1),), pwo_pair=pair, amount_power=t) for i, pair in pairs
    ]


def build_spec(kind, m: int, reduction="cyclic") -> ModelSpec:
    """Deterministic term list for one of the eight model families.

    `reduction` applies only to eq6/eq8 and defaults to cyclic pairing.
    """
    kind = ModelKind.parse(kind)
    if m < 2:
        raise InvalidDimension(f"need m >= 2, got m={m}")
    terms: list[Term] = []
    if kind is ModelKind.MA_LIN:
        terms = _linear(m, 0) + _linear(m, 1)
    elif kind is ModelKind.MA_QUAD:
        for t in range(3):
            terms += _linear(m, t) + _crosses(m, t)
    elif kind is ModelKind.CA_LIN:
        terms = [Term(intercept=True)] + _linear(m)
    elif kind is ModelKind.CA_QUAD:
        terms = [Term(intercept=True)] + _linear(m) + _squares(m) + _crosses(m)
    elif kind is ModelKind.OOFA_MA_ADD:
        terms = _linear(m, 0) + _signs(m, 0) + _linear(m, 1) + _signs(m, 1)
    elif kind is ModelKind.OOFA_MA_FULL:
        pairs = _resolve_reduction(reduction, m)
        for t in range(3):
            terms += _linear(m, t) + _crosses(m, t) + _signs(m, t) + _interactions(pairs, t)
    elif kind is ModelKind.OOFA_CA_ADD:
        terms = [Term(intercept=True)] + _linear(m) + _signs(m)
    elif kind is ModelKind.OOFA_CA_FULL:
        pairs = _resolve_reduction(reduction, m)
        terms = (
            [Term(intercept=True)]
            + _linear(m)
            + _signs(m)
            + _squares(m)
            + _crosses(m)
            + _interactions(pairs)
        )
    return ModelSpec(kind=kind, m=m, terms=tuple(terms))


@dataclass(frozen=True, eq=False)
class ModelMatrix:
    X: np.ndarray
    row_ids: tuple[int, ...]
    col_labels: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.X.shape


def _pair_index(m: int) -> dict[tuple[int, int], int]:
    return {pair: idx for idx, pair in enumerate(pwo_pairs(m))}


def model_matrix(design: Design, spec: ModelSpec) -> ModelMatrix:
    """Materialize the N x p model matrix for a design.

    Entries are exact rational products (signs are exact integers) and are
    converted to float only at the end.
    """
    if design.m != spec.m:
        raise KindMismatch(f"design has m={design.m}, spec has m={spec.m}")
    if spec.kind.uses_amounts:
        if design.kind is not Kind.AMOUNT:
            raise KindMismatch(f"{spec.kind.value} needs an amount design")
    else:
        if design.kind is not Kind.PROPORTION:
            raise KindMismatch(f"{spec.kind.value} needs a proportion design")
        missing = [i for i, run in enumerate(design.runs, 1) if run.amount is None]
        if missing:
            raise MissingAmount(f"runs {missing[:5]} carry no total-amount level")
    if spec.kind.has_pwo and not design.is_expanded:
        raise MissingPwo("spec has sign terms but the design carries no orderings")

    idx = _pair_index(spec.m)
    rows = []
    for run in design.runs:
        comps = run.point.values
        row = []
        for term in spec.terms:
            v = Fraction(1)
            for i, p in term.comp_powers:
                v *= comps[i - 1] ** p
            if term.pwo_pair is not None:
                v *= run.pwo[idx[term.pwo_pair]]
            if term.amount_power:
                v *= run.amount ** term.amount_power
            row.append(float(v))
        rows.append(row)
    X = np.array(rows, dtype=float)
    return ModelMatrix(X=X, row_ids=tuple(range(1, len(rows) + 1)), col_labels=spec.labels)


def _code_column(col: np.ndarray) -> np.ndarray:
    lo, hi = col.min(), col.max()
    if hi == lo:
        return col
    center = (hi + lo) / 2.0
    half = (hi - lo) / 2.0
    return (col - center) / half


def coded_model_matrix(design: Design, spec: ModelSpec) -> ModelMatrix:
    """Model matrix with numeric amount factors centered and scaled to [-1, 1].

    For component-amount specs each a_i is replaced by u_i = (a_i - c_i)/s_i,
    where c_i and s_i are the midpoint and half-range of that column across
    the design; for mixture-amount specs the proportions stay raw (they live
    on the simplex already) and only the total amount is coded.  Sign factors
    are untouched.  This is the coding under which the reference designs'
    documented standard-error, multicollinearity, and power columns reproduce;
    leverage-based criteria do not depend on it.  The same physical design
    yields the same coded matrix in any amount units.
    """
    raw = model_matrix(design, spec)
    comps = np.array([[float(v) for v in run.point.values] for run in design.runs])
    if spec.kind.uses_amounts:
        coded_comps = np.column_stack([_code_column(comps[:, i]) for i in range(spec.m)])
        amounts = None
    else:
        coded_comps = comps
        amounts = _code_column(np.array([float(run.amount) for run in design.runs]))
    idx = _pair_index(spec.m)
    zmat = np.array([run.pwo for run in design.runs], dtype=float) if design.is_expanded else None
    n = len(design.runs)
    cols = []
    for term in spec.terms:
        c = np.ones(n)
        for i, p in term.comp_powers:
            c = c * coded_comps[:, i - 1] ** p
        if term.pwo_pair is not None:
            c = c * zmat[:, idx[term.pwo_pair]]
        if term.amount_power:
            c = c * amounts ** term.amount_power
        cols.append(c)
    return ModelMatrix(X=np.column_stack(cols), row_ids=raw.row_ids, col_labels=spec.labels)


@dataclass(frozen=True, eq=False)
class OlsFit:
    coef: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    df_resid: int
    sse: float
    sigma2: float


def _as_array(X) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(X, ModelMatrix):
        return X.X, X.col_labels
    arr = np.asarray(X, dtype=float)
    return arr, tuple(str(j) for j in range(arr.shape[1]))


def fit_ols(X, y) -> OlsFit:
    """Least squares through an SVD factorization, with an explicit rank
    check that names the columns involved in any deficiency."""
    arr, labels = _as_array(X)
    y = np.asarray(y, dtype=float)
    n, p = arr.shape
    if n < p:
        raise RankDeficient(f"N={n} rows cannot identify p={p} coefficients")
    u, s, vt = np.linalg.svd(arr, full_matrices=False)
    tol = s[0] * max(n, p) * np.finfo(float).eps if s[0] > 0 else 0.0
    rank = int((s > tol).sum())
    if rank < p:
        null_mass = np.abs(vt[rank:]).max(axis=0)
        suspects = [labels[j] for j in np.nonzero(null_mass > 0.5 * null_mass.max())[0]]
        raise RankDeficient(f"rank {rank} < p={p}; deficient columns include {suspects}")
    coef = (vt.T * (1.0 / s)) @ (u.T @ y)
    fitted = arr @ coef
    residuals = y - fitted
    sse = float(residuals @ residuals)
    df = n - p
    sigma2 = sse / df if df > 0 else float("nan")
    return OlsFit(coef=coef, fitted=fitted, residuals=residuals, df_resid=df, sse=sse, sigma2=sigma2)
