import random
from fractions import Fraction

import pytest

from concavex.errors import DegenerateWeights
from concavex.geometry import TargetSpec
from concavex.invariants import multiple_cover_table
from concavex.oracle import lines_on_hypersurface, random_weights, weight_independence_check


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 27), (4, 2875), (5, 698005)])
def test_known_counts(n, expected):
    assert lines_on_hypersurface(n) == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weight_independent_and_integral(n):
    report = weight_independence_check(n, trials=4, seed=n)
    assert report["value"] == lines_on_hypersurface(n)
    assert report["trials"] == 4


def test_random_weights_agree():
    rng = random.Random(3)
    for _ in range(5):
        w = random_weights(4, rng)
        assert lines_on_hypersurface(4, w) == 2875
    assert lines_on_hypersurface(3, [Fraction(1, 2), 3, -7, 11]) == 27


def test_degenerate_weights():
    with pytest.raises(DegenerateWeights, match="not pairwise distinct"):
        lines_on_hypersurface(4, [1, 1, 2, 3, 4])
    with pytest.raises(ValueError):
        lines_on_hypersurface(1)
    with pytest.raises(ValueError):
        lines_on_hypersurface(3, [1, 2, 3])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_agrees_with_series_pipeline(n):
    spec = TargetSpec.build([n], [[2 * n - 3]])
    assert multiple_cover_table(spec, 1).values() == [lines_on_hypersurface(n)]
