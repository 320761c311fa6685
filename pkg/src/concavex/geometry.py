"""Targets: a product of projective spaces with a split bundle of line bundles."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple

from .algebra import LAMBDA, CohElement, LaurentScalar, SpaceShape, integrate, invert_unit
from .errors import ConfigError, PolarityError


class Polarity(enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LineBundleSpec:
    """``O(a_1, ..., a_l)``."""

    multidegree: tuple

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(a) for a in self.multidegree))

    def pairing_with(self, beta):
        """``<c_1(L), beta>``."""
        return sum(a * d for a, d in zip(self.multidegree, beta))

    def __str__(self):
        return "O(" + ",".join(str(a) for a in self.multidegree) + ")"


def classify_polarity(line):
    """Convex iff every ``a_i >= 0``; concave iff every ``a_i <= -1``.

    Over nonconstant maps of class ``beta`` the pullback is ``O(sum a_i d_i)``,
    and ``d_i`` may be taken arbitrarily large along any single factor.
    """
    a = line.multidegree
    if all(x >= 0 for x in a):
        return Polarity.CONVEX
    if all(x <= -1 for x in a):
        return Polarity.CONCAVE
    raise PolarityError(f"{line} is neither convex nor concave")


@dataclass(frozen=True)
class BundleSpec:
    lines: tuple = ()

    def __post_init__(self):
        checked = []
        for entry in self.lines:
            if isinstance(entry, LineBundleSpec):
                entry = (entry, classify_polarity(entry))
            line, pol = entry
            if classify_polarity(line) is not pol:
                raise PolarityError(f"{line} cannot carry polarity {pol}")
            checked.append((line, pol))
        object.__setattr__(self, "lines", tuple(checked))

    @property
    def rank(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __str__(self):
        if not self.lines:
            return "0"
        return " + ".join(str(line) for line, _ in self.lines)


@dataclass(frozen=True)
class TargetSpec:
    shape: SpaceShape
    bundle: BundleSpec

    def __post_init__(self):
        for line, _ in self.bundle:
            if len(line.multidegree) != self.shape.nfactors:
                raise PolarityError(
                    f"{line} has {len(line.multidegree)} degrees but {self.shape} has "
                    f"{self.shape.nfactors} factors")

    @classmethod
    def build(cls, dims, multidegrees=()):
        """``TargetSpec.build([4], [[5]])`` is the quintic setup."""
        shape = SpaceShape(tuple(dims))
        lines = tuple(LineBundleSpec(tuple(m)) for m in multidegrees)
        for line in lines:
            if len(line.multidegree) != shape.nfactors:
                raise PolarityError(f"{line} does not match {shape}")
        return cls(shape, BundleSpec(lines))

    @property
    def is_convex(self):
        return all(pol is Polarity.CONVEX for _, pol in self.bundle)

    def to_dict(self):
        return {"space": list(self.shape.dims),
                "bundle": [list(line.multidegree) for line, _ in self.bundle]}

    def __str__(self):
        return f"({self.shape}, {self.bundle})"


def c1(line, shape):
    return sum((CohElement.divisor(shape, i, a) for i, a in enumerate(line.multidegree) if a),
               CohElement.zero(shape))


def c1_equivariant(line, shape, equivariant=True):
    """``c_1(L) + lambda`` (fiber weight 1); plain ``c_1(L)`` if not equivariant."""
    base = c1(line, shape)
    return base + CohElement.scalar(shape, LAMBDA) if equivariant else base


def c1_tangent(shape):
    return sum((CohElement.divisor(shape, i, n + 1) for i, n in enumerate(shape.dims)),
               CohElement.zero(shape))


def euler_factor(line, pol, shape, equivariant=True):
    """``E(L)``: the equivariant Euler class, inverted for concave ``L``."""
    e = c1_equivariant(line, shape, equivariant)
    if pol is Polarity.CONVEX:
        return e
    return invert_unit(e)


def euler_class(spec, equivariant=True):
    out = CohElement.one(spec.shape)
    for line, pol in spec.bundle:
        out = out * euler_factor(line, pol, spec.shape, equivariant)
    return out


def pairing(a, b, spec, equivariant=True):
    """``<A, B> = integral of A B E(V)``."""
    return integrate(a * b * euler_class(spec, equivariant))


class DegreeRule(NamedTuple):
    weights: tuple
    hypothesis: bool


def degree_rule(spec):
    """Weights ``deg q_i`` balancing ``c1(TX) - sum_convex c1 + sum_concave c1``."""
    weights = [n + 1 for n in spec.shape.dims]
    for line, pol in spec.bundle:
        sign = -1 if pol is Polarity.CONVEX else 1
        for i, a in enumerate(line.multidegree):
            weights[i] += sign * a
    weights = tuple(weights)
    return DegreeRule(weights, all(w >= 0 for w in weights))


def parse_target_text(text):
    """Parse ``space = [n1,...]`` / ``bundle = [[a11,...], ...]`` lines.

    Unknown keys are returned alongside so callers can layer their own
    settings into the same file.
    """
    values = parse_key_values(text)
    if "space" not in values:
        raise ConfigError("target description needs a 'space' entry")
    space = values.pop("space")
    bundle = values.pop("bundle", [])
    if isinstance(space, int):
        space = [space]
    if not isinstance(space, list) or not all(isinstance(n, int) for n in space):
        raise ConfigError(f"malformed space {space!r}")
    if not isinstance(bundle, list) or not all(
            isinstance(m, list) and all(isinstance(a, int) for a in m) for m in bundle):
        raise ConfigError(f"malformed bundle {bundle!r}")
    for m in bundle:
        if len(m) != len(space):
            raise ConfigError(f"multidegree {m} does not match space {space}")
    try:
        shape = SpaceShape(tuple(space))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = tuple(LineBundleSpec(tuple(m)) for m in bundle)
    return TargetSpec(shape, BundleSpec(lines)), values


def parse_key_values(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            values[key] = json.loads(value)
        except json.JSONDecodeError:
            values[key] = value
    return values


def gram_matrix(spec, equivariant=True):
    """Pairing matrix on the monomial basis ``prod p_i^{e_i}``."""
    basis = [CohElement.monomial(spec.shape, e) for e in spec.shape.monomials()]
    euler = euler_class(spec, equivariant)
    return [[integrate(a * b * euler) for b in basis] for a in basis]


def gram_determinant(spec, equivariant=True):
    """Exact determinant by permutation expansion (no division needed)."""
    g = gram_matrix(spec, equivariant)
    n = len(g)
    total = LaurentScalar()
    for perm in permutations(range(n)):
        term = LaurentScalar.const(_sign(perm))
        for row, col in enumerate(perm):
            term = term * g[row][col]
            if not term:
                break
        total = total + term
    return total


def _sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
