import json

import pytest

from concavex.algebra import HBAR, LAMBDA, CohElement, SpaceShape
from concavex.errors import HypothesisViolated, InvariantViolation, PositiveHbarPowers
from concavex.geometry import TargetSpec, degree_rule
from concavex.ifunction import build_I
from concavex.mirror import MirrorData, apply_mirror, solve_mirror, transform, verify_theorem_form
from concavex.qseries import QSeries, ScalarQSeries, series_exp, series_log

QUINTIC = TargetSpec.build([4], [[5]])
CUBIC_P3 = TargetSpec.build([3], [[3]])
CONIFOLD = TargetSpec.build([1], [[-1], [-1]])

CONFIGS = [QUINTIC, CUBIC_P3, CONIFOLD, TargetSpec.build([2], []), TargetSpec.build([1, 1], [[1, 1]]),
           TargetSpec.build([2], [[-3]]), TargetSpec.build([1, 2], [[1, 1], [-1, -2]])]


def solved(spec, cutoff):
    I = build_I(spec, cutoff)
    m = solve_mirror(I, spec)
    return I, m, apply_mirror(I, m)


def test_rank_zero_and_conifold_are_trivial():
    for spec in (TargetSpec.build([2], []), CONIFOLD):
        I, m, J = solved(spec, 5)
        assert m.is_zero()
        assert J == I


def test_cubic_p3_only_needs_fminus1():
    I, m, J = solved(CUBIC_P3, 3)
    assert m.fminus1[(1,)] == -6
    assert m.fminus1 == ScalarQSeries(CUBIC_P3.shape, 3, {(1,): -6})
    assert not m.f0 and not any(m.fdivisor)


def test_cubic_p3_degree_one_of_J():
    _, _, J = solved(CUBIC_P3, 2)
    P3 = CUBIC_P3.shape
    p = CohElement.divisor(P3, 0)
    expected = p * (HBAR ** -2 * 9) - p ** 2 * (HBAR ** -3 * 18) + p ** 3 * (HBAR ** -4 * 21)
    assert J[(1,)].lambda_limit() == expected


def test_quintic_leading_terms():
    I, m, J = solved(QUINTIC, 2)
    assert m.f0[(1,)] == -120
    assert m.fdivisor[0][(1,)] == -770
    assert m.fminus1[(1,)] == LAMBDA * -274
    # f_0 is -log of the hbar^0 part evaluated at the rescaled variable, not
    # of the raw hbar^0 part: the two agree only in degree one
    F = I.hbar_slice(0).lambda_limit()
    raw = ScalarQSeries(QUINTIC.shape, 2, {b: c.scalar_part() for b, c in F.items()})
    naive = series_log(raw)
    assert naive[(1,)] == 120
    assert m.f0[(2,)].lambda_limit() != -naive[(2,)]
    assert m.f0[(2,)] == -13800


@pytest.mark.parametrize("spec", CONFIGS, ids=str)
def test_normalization_and_degrees(spec):
    I, m, J = solved(spec, 4)
    report = verify_theorem_form(I, m, J, spec)
    assert report.ok, report.notes
    weights = degree_rule(spec).weights
    for name, s in m.named():
        assert s.weighted_degrees(weights) <= {1 if name == "f-1" else 0}
        assert not s.constant_term()


@pytest.mark.parametrize("spec", CONFIGS, ids=str)
@pytest.mark.parametrize("seed", [0, 7])
def test_permuted_order_gives_same_solution(spec, seed):
    I = build_I(spec, 3)
    assert solve_mirror(I, spec, order=seed) == solve_mirror(I, spec)


@pytest.mark.parametrize("spec", [QUINTIC, TargetSpec.build([1, 1], [[1, 1]])], ids=str)
def test_cutoff_consistency(spec):
    I = build_I(spec, 4)
    full = solve_mirror(I, spec)
    for c in (1, 2, 3):
        assert solve_mirror(I, spec, cutoff=c) == full.truncate(c)


@pytest.mark.parametrize("spec", CONFIGS, ids=str)
def test_idempotent(spec):
    _, _, J = solved(spec, 3)
    assert solve_mirror(J, spec).is_zero()


def test_hypothesis_violation():
    spec = TargetSpec.build([1], [[3]])
    assert degree_rule(spec).weights == (-1,)
    with pytest.raises(HypothesisViolated, match="hypothesis violated"):
        solve_mirror(build_I(spec, 2), spec)


def test_positive_hbar_powers_rejected():
    shape = SpaceShape((2,))
    spec = TargetSpec.build([2], [])
    I = build_I(spec, 2) + QSeries(shape, 2, {(1,): CohElement.scalar(shape, HBAR)})
    with pytest.raises(PositiveHbarPowers, match="positive hbar powers"):
        solve_mirror(I, spec)


def test_constant_term_must_be_one():
    spec = TargetSpec.build([2], [])
    I = build_I(spec, 2) * 2
    with pytest.raises(HypothesisViolated):
        solve_mirror(I, spec)


def test_inhomogeneous_residual_rejected():
    # a stray hbar^0 term of the wrong degree cannot be absorbed by f0
    spec = TargetSpec.build([2], [])
    shape = spec.shape
    I = build_I(spec, 2) + QSeries(shape, 2, {(1,): CohElement.scalar(shape, LAMBDA)})
    with pytest.raises(HypothesisViolated):
        solve_mirror(I, spec)


def test_residual_outside_span_rejected():
    spec = TargetSpec.build([2], [])
    shape = spec.shape
    p = CohElement.divisor(shape, 0)
    I = build_I(spec, 2) + QSeries(shape, 2, {(1,): p * p * (HBAR ** -1 * LAMBDA ** -4)})
    with pytest.raises(HypothesisViolated, match="outside span"):
        solve_mirror(I, spec)


def test_apply_mirror_rejects_wrong_data():
    I = build_I(QUINTIC, 2)
    with pytest.raises(InvariantViolation):
        apply_mirror(I, MirrorData.zero(QUINTIC.shape, 2))


def test_transform_with_only_f0_is_scalar_multiple():
    spec = TargetSpec.build([2], [])
    I = build_I(spec, 3)
    f0 = ScalarQSeries(spec.shape, 3, {(1,): 4, (2,): -1})
    z = ScalarQSeries.zero(spec.shape, 3)
    m = MirrorData(f0, z, (z,))
    assert transform(I, m) == series_exp(f0).to_coh() * I


def test_mirror_data_round_trip():
    _, m, _ = solved(QUINTIC, 3)
    text = json.dumps(m.to_dict(), sort_keys=True)
    back = MirrorData.from_dict(json.loads(text))
    assert back == m
    rows = m.to_dict()["fminus1"]
    assert rows[0] == {"beta": [1], "lambda_exp": 1, "num": -274, "den": 1}


def test_report_flags_a_bad_solution():
    I, m, J = solved(QUINTIC, 2)
    shifted = MirrorData(m.f0 + ScalarQSeries(QUINTIC.shape, 2, {(1,): LAMBDA}), m.fminus1, m.fdivisor)
    report = verify_theorem_form(I, shifted, J, QUINTIC)
    assert not report.ok
    assert not report.degree_checks["f0"]
    assert not report.unique
    assert isinstance(report.to_dict()["notes"], list)
