"""Model specs, matrices, and least squares."""

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from oamix import (
    DesignPoint,
    Kind,
    ModelKind,
    build_spec,
    cross_amounts,
    fit_ols,
    leverages,
    model_matrix,
    pwo_from_ordering,
    simplex_lattice,
)
from oamix.core import Design, OofARun
from oamix.errors import (
    KindMismatch,
    MissingAmount,
    MissingPwo,
    RankDeficient,
    UnsupportedReduction,
)
from oamix.models import coded_model_matrix


def expected_p(kind: ModelKind, m: int) -> int:
    """Term counts assembled independently of build_spec."""
    pairs = comb(m, 2)
    return {
        ModelKind.MA_LIN: 2 * m,
        ModelKind.MA_QUAD: 3 * (m + pairs),
        ModelKind.CA_LIN: 1 + m,
        ModelKind.CA_QUAD: 1 + 2 * m + pairs,
        ModelKind.OOFA_MA_ADD: 2 * (m + pairs),
        ModelKind.OOFA_MA_FULL: 3 * (2 * m + 2 * pairs),
        ModelKind.OOFA_CA_ADD: 1 + m + pairs,
        ModelKind.OOFA_CA_FULL: 1 + 3 * m + 2 * pairs,
    }[kind]


@pytest.mark.parametrize("kind", list(ModelKind))
@pytest.mark.parametrize("m", range(2, 6))
def test_term_counts(kind, m):
    assert build_spec(kind, m).p == expected_p(kind, m)


def test_eq6_m3_has_36_terms_in_blocks():
    spec = build_spec("eq6", 3)
    assert spec.p == 36
    block = ["x1", "x2", "x3", "x1x2", "x1x3", "x2x3", "z12", "z13", "z23",
             "x1z12", "x2z23", "x3z13"]
    expected = block + [f"{t}A" for t in block] + [f"{t}A^2" for t in block]
    assert list(spec.labels) == expected


def test_eq8_m3_term_list_and_labels():
    spec = build_spec("eq8", 3)
    assert list(spec.labels) == [
        "1", "a1", "a2", "a3", "z12", "z13", "z23",
        "a11", "a22", "a33", "a1a2", "a1a3", "a2a3",
        "a1z12", "a2z23", "a3z13",
    ]


def test_ca_lin_terms():
    assert list(build_spec("eq3", 3).labels) == ["1", "a1", "a2", "a3"]


def test_model_kind_parse():
    assert ModelKind.parse("eq6") is ModelKind.OOFA_MA_FULL
    assert ModelKind.parse("OOFA_CA_FULL") is ModelKind.OOFA_CA_FULL
    with pytest.raises(UnsupportedReduction):
        ModelKind.parse("eq9")


def test_reduction_rules():
    cyclic = build_spec("eq8", 4)
    labels = [t for t in cyclic.labels if "z" in t and t.startswith("a")]
    assert labels == ["a1z12", "a2z23", "a3z34", "a4z14"]
    keep_all = build_spec("eq8", 3, reduction="keep_all")
    assert keep_all.p == 1 + 3 * 3 + 3 + 6
    custom = build_spec("eq8", 3, reduction=[(1, (1, 3)), (2, (2, 3))])
    assert [t for t in custom.labels if t.startswith("a1z") or t.startswith("a2z")] == [
        "a1z13", "a2z23"
    ]
    with pytest.raises(UnsupportedReduction):
        build_spec("eq8", 3, reduction="bogus")
    with pytest.raises(UnsupportedReduction):
        build_spec("eq8", 3, reduction=[(1, (2, 3))])  # not a member of its pair
    with pytest.raises(UnsupportedReduction):
        build_spec("eq8", 3, reduction=[(1, (1, 2)), (1, (1, 2))])


def test_matrix_shapes(table2, table3, spec6, spec8):
    assert model_matrix(table3, spec6).shape == (63, 36)
    assert model_matrix(table2, spec8).shape == (31, 16)


def test_full_rank_on_reference_designs(table2, table3, spec6, spec8):
    assert np.linalg.matrix_rank(model_matrix(table3, spec6).X) == 36
    assert np.linalg.matrix_rank(model_matrix(table2, spec8).X) == 16


def test_vertex_row_eq1():
    point = DesignPoint((1, 0, 0), Kind.PROPORTION)
    run = OofARun(point, ordering=(1,), pwo=pwo_from_ordering(point, (1,)), amount=Fraction(1))
    d = Design(m=3, kind=Kind.PROPORTION, runs=(run,))
    X = model_matrix(d, build_spec("eq1", 3)).X
    assert X.tolist() == [[1, 0, 0, 1, 0, 0]]


def test_scheffe_rows_sum_to_one(table3, spec6):
    X = model_matrix(table3, spec6).X
    assert np.allclose(X[:, :3].sum(axis=1), 1.0)


def test_matrix_kind_checks(table1, table2, table3, spec6, spec8):
    with pytest.raises(KindMismatch):
        model_matrix(table2, spec6)  # amount design under a proportion spec
    with pytest.raises(KindMismatch):
        model_matrix(table3, spec8)  # proportion design under an amount spec
    with pytest.raises(KindMismatch):
        model_matrix(table2, build_spec("eq8", 4))  # component count mismatch
    with pytest.raises(MissingAmount):
        model_matrix(table1, spec6)  # no amount levels attached yet
    base = simplex_lattice(3, 3)
    with pytest.raises(MissingPwo):
        model_matrix(cross_amounts(base, [1]), spec6)


def test_build_spec_rejects_small_m():
    from oamix.errors import InvalidDimension

    with pytest.raises(InvalidDimension):
        build_spec("eq1", 1)


def test_exchange_symmetry_leverages(table1, spec6):
    # relabel components by a cycle; leverage multiset is unchanged
    perm = {1: 2, 2: 3, 3: 1}
    runs = []
    for run in table1.runs:
        values = [None] * 3
        for i, v in enumerate(run.point.values, start=1):
            values[perm[i] - 1] = v
        point = DesignPoint(tuple(values), Kind.PROPORTION)
        ordering = tuple(perm[c] for c in run.ordering)
        runs.append(OofARun(point, ordering=ordering, pwo=pwo_from_ordering(point, ordering)))
    permuted = cross_amounts(
        Design(m=3, kind=Kind.PROPORTION, runs=tuple(runs)),
        [Fraction(3, 4), Fraction(3, 2), Fraction(3)],
    )
    original = cross_amounts(table1, [Fraction(3, 4), Fraction(3, 2), Fraction(3)])
    lev_a = np.sort(leverages(model_matrix(original, spec6)))
    lev_b = np.sort(leverages(model_matrix(permuted, spec6)))
    assert np.allclose(lev_a, lev_b, atol=1e-8)


def test_coded_matrix_same_shape_and_signs(table2, spec8):
    raw = model_matrix(table2, spec8)
    coded = coded_model_matrix(table2, spec8)
    assert coded.shape == raw.shape
    assert coded.col_labels == raw.col_labels
    # sign columns are untouched by coding
    assert np.array_equal(coded.X[:, 4:7], raw.X[:, 4:7])


def test_fit_ols_identity():
    fit = fit_ols(np.eye(3), [1.0, 2.0, 3.0])
    assert np.allclose(fit.coef, [1, 2, 3])
    assert fit.df_resid == 0


def test_fit_ols_recovers_coefficients(table2, spec8):
    X = model_matrix(table2, spec8).X
    rng = np.random.default_rng(0)
    beta = rng.normal(size=X.shape[1])
    fit = fit_ols(X, X @ beta)
    assert np.max(np.abs(fit.coef - beta)) / np.max(np.abs(beta)) < 1e-10


def test_fit_ols_residual_df(table3, spec6):
    mm = model_matrix(table3, spec6)
    rng = np.random.default_rng(1)
    fit = fit_ols(mm, rng.normal(size=63))
    assert fit.df_resid == 27


def test_fit_ols_rank_deficient_reports_labels():
    X = np.column_stack([np.ones(5), np.arange(5.0), 2 * np.arange(5.0)])
    with pytest.raises(RankDeficient) as err:
        fit_ols(X, np.zeros(5))
    assert "1" in str(err.value) or "2" in str(err.value)


def test_fit_ols_more_params_than_rows():
    with pytest.raises(RankDeficient):
        fit_ols(np.ones((2, 3)), [1.0, 2.0])
