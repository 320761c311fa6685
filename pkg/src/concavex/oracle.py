"""Lines on hypersurfaces by torus localization on ``G(2, n+1)``.

The number of lines on a generic hypersurface of degree ``k = 2n - 3`` in
``P^n`` is the integral of the top Chern class of ``Sym^k S^*`` over the
Grassmannian of lines.  The torus with weights ``w_0..w_n`` fixes the
coordinate lines ``{i, j}``; Bott's formula turns the integral into a sum
over those points.  Nothing here touches the series machinery.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .errors import DegenerateWeights, LocalizationMismatch

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def default_weights(n):
    if n + 1 > len(DEFAULT_PRIMES):
        return tuple(range(1, n + 2))
    return DEFAULT_PRIMES[: n + 1]


def _fixed_point_term(weights, i, j, k):
    wi, wj = weights[i], weights[j]
    num = 1
    for a in range(k + 1):
        num *= a * wi + (k - a) * wj
    den = 1
    for m, wm in enumerate(weights):
        if m in (i, j):
            continue
        den *= (wm - wi) * (wm - wj)
    if den == 0:
        raise DegenerateWeights(f"weights {weights} vanish on the tangent space at {{{i}, {j}}}")
    return Fraction(num) / den


def lines_on_hypersurface(n, weights=None):
    """Number of lines on a generic degree ``2n-3`` hypersurface in ``P^n``."""
    k = 2 * n - 3
    if k < 1:
        raise ValueError(f"need 2n - 3 >= 1, got n = {n}")
    weights = tuple(Fraction(w) for w in (weights if weights is not None else default_weights(n)))
    if len(weights) != n + 1:
        raise ValueError(f"need {n + 1} weights, got {len(weights)}")
    if len(set(weights)) != len(weights):
        raise DegenerateWeights(f"weights {weights} are not pairwise distinct")
    total = sum(_fixed_point_term(weights, i, j, k) for i, j in combinations(range(n + 1), 2))
    return total


def random_weights(n, rng, bound=50):
    """Distinct integer weights, re-sampled until nondegenerate."""
    while True:
        w = tuple(rng.randint(-bound, bound) for _ in range(n + 1))
        if len(set(w)) == len(w):
            return w


def weight_independence_check(n, trials=3, seed=0, weights=None):
    """Evaluate with several weight vectors and require one common integer."""
    if trials < 2:
        raise ValueError("weight independence needs at least two trials")
    rng = random.Random(seed)
    choices = list(weights or [])
    if not choices:
        choices.append(default_weights(n))
    while len(choices) < trials:
        choices.append(random_weights(n, rng))
    values = []
    for w in choices:
        try:
            values.append(lines_on_hypersurface(n, w))
        except DegenerateWeights:
            w = random_weights(n, rng)
            values.append(lines_on_hypersurface(n, w))
    distinct = set(values)
    if len(distinct) != 1:
        raise LocalizationMismatch(f"localization depends on weights for n={n}: {values}")
    value = values[0]
    if value.denominator != 1:
        raise LocalizationMismatch(f"localization for n={n} gave non-integer {value}")
    return {"n": n, "value": int(value), "weights": [list(map(str, w)) for w in choices], "trials": len(choices)}
