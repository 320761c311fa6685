"""Mirror transformation: normalize I to a series ``1 + O(h^-2)``.

Given ``I`` the solver finds the unique series ``f_0, f_{-1}, f_1..f_l``
without constant terms such that

    exp(f_0 + (f_{-1} + sum_i p_i f_i) / h) * I(q_1 e^{f_1}, ..., q_l e^{f_l})

has hbar^0 part 1 and vanishing hbar^-1 part.  The unknowns of total
q-degree ``k`` enter the degree-``k`` coefficient additively as
``f_0 + (f_{-1} + sum p_i f_i)/h`` (every other contribution involves only
lower degrees), so the solve is triangular in ``k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import HBAR, CohElement, LaurentScalar
from .errors import HypothesisViolated, InvariantViolation, PositiveHbarPowers
from .geometry import degree_rule
from .qseries import QSeries, ScalarQSeries, classes_of_degree, rescale_q, series_mul

F0 = "f0"
FMINUS1 = "f-1"


@dataclass(frozen=True)
class MirrorData:
    f0: ScalarQSeries
    fminus1: ScalarQSeries
    fdivisor: tuple

    @classmethod
    def zero(cls, shape, cutoff):
        z = ScalarQSeries.zero(shape, cutoff)
        return cls(z, z, tuple(z for _ in shape.dims))

    @property
    def shape(self):
        return self.f0.shape

    @property
    def cutoff(self):
        return self.f0.cutoff

    def named(self):
        """``[(name, series)]`` in the order f0, f-1, f1..fl."""
        out = [(F0, self.f0), (FMINUS1, self.fminus1)]
        out += [(f"f{i + 1}", f) for i, f in enumerate(self.fdivisor)]
        return out

    def is_zero(self):
        return not any(s for _, s in self.named())

    def truncate(self, cutoff):
        return MirrorData(self.f0.truncate(cutoff), self.fminus1.truncate(cutoff),
                          tuple(f.truncate(cutoff) for f in self.fdivisor))

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "shape": list(self.shape.dims),
            "f0": self.f0.to_records(),
            "fminus1": self.fminus1.to_records(),
            "fdivisor": [f.to_records() for f in self.fdivisor],
        }

    @classmethod
    def from_dict(cls, data):
        from .algebra import SpaceShape

        shape = SpaceShape(tuple(data["shape"]))
        cutoff = data["cutoff"]

        def load(rows):
            return ScalarQSeries.from_records(shape, cutoff, rows)

        return cls(load(data["f0"]), load(data["fminus1"]),
                   tuple(load(rows) for rows in data["fdivisor"]))


def transform(I, m):
    """``exp(f_0 + (f_{-1} + sum p_i f_i)/h) * I(q e^f)``."""
    if m.is_zero():
        return I
    shape = I.shape
    hinv = HBAR ** -1
    exponent = m.f0.to_coh() + m.fminus1.to_coh() * hinv
    for i, fi in enumerate(m.fdivisor):
        exponent = exponent + fi.to_coh() * (CohElement.divisor(shape, i) * hinv)
    return series_mul(exponent.exp(), rescale_q(I, list(m.fdivisor)))


def _check_input(I, spec):
    rule = degree_rule(spec)
    if not rule.hypothesis:
        raise HypothesisViolated(
            f"hypothesis violated: degree weights {rule.weights} of {spec} are not all nonnegative")
    if I.constant_term() != CohElement.one(I.shape):
        raise HypothesisViolated(f"hypothesis violated: I has constant term {I.constant_term()}")
    positive = sorted(a for a in I.hbar_exponents() if a > 0)
    if positive:
        raise PositiveHbarPowers(f"positive hbar powers present in I: {positive}")
    return rule.weights


def _homogeneous(value, expected, what, beta):
    bad = {b for b in value.lambda_exponents() if b != expected}
    if bad:
        raise HypothesisViolated(
            f"hypothesis violated: {what} at q^{beta} is {value}, expected degree {expected}")
    return value


def _read_unknown(coeff, family, beta, weights):
    """Value of one unknown read off a degree-k coefficient of the transform
    evaluated with that unknown still zero."""
    positive = sorted(a for a in coeff.hbar_exponents() if a > 0)
    if positive:
        raise PositiveHbarPowers(f"positive hbar powers {positive} at q^{beta}")
    wb = sum(w * d for w, d in zip(weights, beta))
    shape = coeff.shape
    if family == F0:
        s0 = coeff.hbar_slice(0)
        if not s0.is_scalar():
            raise HypothesisViolated(f"hypothesis violated: hbar^0 part {s0} at q^{beta} is not a scalar")
        return _homogeneous(-s0.scalar_part(), -wb, "f0", beta)
    s1 = coeff.hbar_slice(-1)
    allowed = {shape.zero_exps} | {shape.unit_exps(i) for i in range(shape.nfactors)}
    outside = sorted(e for e in s1.terms if e not in allowed)
    if outside:
        raise HypothesisViolated(
            f"hypothesis violated: hbar^-1 residual {s1} at q^{beta} has components {outside} "
            "outside span(p_1..p_l, lambda)")
    if family == FMINUS1:
        return _homogeneous(-s1.scalar_part(), 1 - wb, "f-1", beta)
    return _homogeneous(-s1.coefficient(shape.unit_exps(family)), -wb, f"f{family + 1}", beta)


def solve_mirror(I, spec, cutoff=None, order=None):
    """Unique correction series normalizing ``I``.

    ``order`` (an int seed or a callable permuting a list in place) switches
    from solving a whole degree at once to solving one unknown at a time in
    a permuted order, recomputing the residual after each assignment.  The
    result must not depend on it.
    """
    if cutoff is None:
        cutoff = I.cutoff
    I = I.truncate(cutoff)
    weights = _check_input(I, spec)
    shape = I.shape
    families = [F0, FMINUS1] + list(range(shape.nfactors))
    values = {fam: {} for fam in families}

    def current(k):
        def series(fam):
            return ScalarQSeries(shape, k, values[fam])
        return MirrorData(series(F0), series(FMINUS1),
                          tuple(series(i) for i in range(shape.nfactors)))

    if order is not None and not callable(order):
        rng = random.Random(order)
        order = rng.shuffle

    for k in range(1, cutoff + 1):
        I_k = I.truncate(k)
        classes = classes_of_degree(shape.nfactors, k)
        if order is None:
            phi = transform(I_k, current(k))
            for beta in classes:
                for fam in families:
                    values[fam][beta] = _read_unknown(phi[beta], fam, beta, weights)
        else:
            unknowns = [(beta, fam) for beta in classes for fam in families]
            order(unknowns)
            for beta, fam in unknowns:
                phi = transform(I_k, current(k))
                values[fam][beta] = _read_unknown(phi[beta], fam, beta, weights) + \
                    values[fam].get(beta, LaurentScalar())
    return current(cutoff)


def _normalization_defects(phi):
    defects = []
    one = CohElement.one(phi.shape)
    for beta, c in phi.items():
        positive = sorted(a for a in c.hbar_exponents() if a > 0)
        if positive:
            defects.append(f"q^{beta}: positive hbar powers {positive}")
        target = one if not any(beta) else CohElement.zero(phi.shape)
        if c.hbar_slice(0) != target:
            defects.append(f"q^{beta}: hbar^0 part {c.hbar_slice(0)}")
        if c.hbar_slice(-1):
            defects.append(f"q^{beta}: hbar^-1 part {c.hbar_slice(-1)}")
    if not phi.constant_term():
        defects.append("missing constant term 1")
    return defects


def apply_mirror(I, m):
    """The Givental correlator ``J^V`` as the transformed ``I``."""
    if m.cutoff != I.cutoff:
        I = I.truncate(m.cutoff)
    phi = transform(I, m)
    defects = _normalization_defects(phi)
    if defects:
        raise InvariantViolation("transformed series is not 1 + O(h^-2): " + "; ".join(defects[:3]))
    return phi


@dataclass
class TheoremReport:
    constant_term_free: bool
    expected_degrees: dict
    degree_checks: dict
    unique: bool
    normalized: bool
    trivial: bool
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return (self.constant_term_free and all(self.degree_checks.values())
                and self.unique and self.normalized)

    def to_dict(self):
        return {
            "ok": self.ok,
            "constant_term_free": self.constant_term_free,
            "expected_degrees": self.expected_degrees,
            "degree_checks": self.degree_checks,
            "unique": self.unique,
            "normalized": self.normalized,
            "trivial": self.trivial,
            "notes": self.notes,
        }


def verify_theorem_form(I, m, J, spec, seed=1):
    """Check the shape constraints on a solution: no constant terms,
    ``deg f_i = 0`` and ``deg f_{-1} = 1``, uniqueness under a permuted solve,
    and the normalization of ``J``."""
    weights = degree_rule(spec).weights
    notes = []
    expected = {name: (1 if name == FMINUS1 else 0) for name, _ in m.named()}
    constant_free = all(not s.constant_term() for _, s in m.named())
    checks = {}
    for name, s in m.named():
        degs = s.weighted_degrees(weights)
        checks[name] = degs <= {expected[name]}
        if not checks[name]:
            notes.append(f"{name} has degrees {sorted(degs)}")
    resolved = solve_mirror(I, spec, cutoff=m.cutoff, order=seed)
    unique = resolved == m
    if not unique:
        notes.append("permuted solve disagrees")
    defects = _normalization_defects(J)
    notes.extend(defects[:3])
    return TheoremReport(constant_free, expected, checks, unique, not defects, m.is_zero(), notes)
