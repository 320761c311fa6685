"""Truncated formal series in ``q_1..q_l``.

Terms are indexed by effective classes ``beta = (d_1..d_l)``, ``d_i >= 0``,
and truncated at total degree ``sum(d_i) <= cutoff``.  :class:`QSeries`
carries :class:`~concavex.algebra.CohElement` coefficients,
:class:`ScalarQSeries` carries :class:`~concavex.algebra.LaurentScalar`
coefficients.  Both are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .algebra import CohElement, LaurentScalar, SpaceShape
from .errors import SeriesError


def classes_of_degree(nvars, k):
    """Effective classes with ``sum(beta) == k`` in lexicographic order."""
    if nvars == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        out.extend((first,) + rest for rest in classes_of_degree(nvars - 1, k - first))
    return sorted(out)


def classes_up_to(nvars, cutoff):
    return [b for k in range(cutoff + 1) for b in classes_of_degree(nvars, k)]


def _add_beta(b1, b2):
    return tuple(x + y for x, y in zip(b1, b2))


class _Series:
    def __init__(self, shape, cutoff, coeffs=None):
        if not isinstance(shape, SpaceShape):
            shape = SpaceShape(tuple(shape))
        cutoff = int(cutoff)
        if cutoff < 0:
            raise SeriesError(f"cutoff must be >= 0, got {cutoff}")
        self.shape = shape
        self.cutoff = cutoff
        clean = {}
        for beta, c in (coeffs or {}).items():
            beta = tuple(int(d) for d in beta)
            if len(beta) != shape.nfactors or any(d < 0 for d in beta):
                raise SeriesError(f"{beta} is not an effective class for {shape}")
            if sum(beta) > cutoff:
                continue
            c = self._coerce(c)
            if c:
                clean[beta] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, shape, cutoff, coeffs):
        obj = cls.__new__(cls)
        obj.shape = shape
        obj.cutoff = cutoff
        obj.coeffs = coeffs
        return obj

    def _coerce(self, c):
        raise NotImplementedError

    def _zero_coeff(self):
        raise NotImplementedError

    @classmethod
    def one(cls, shape, cutoff):
        if not isinstance(shape, SpaceShape):
            shape = SpaceShape(tuple(shape))
        return cls(shape, cutoff, {shape.zero_exps: 1})

    @classmethod
    def zero(cls, shape, cutoff):
        return cls(shape, cutoff)

    def _check(self, other):
        if self.shape != other.shape:
            raise SeriesError(f"shape mismatch: {self.shape} vs {other.shape}")
        if self.cutoff != other.cutoff:
            raise SeriesError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    # -- access -------------------------------------------------------------

    def __getitem__(self, beta):
        beta = tuple(beta) if not isinstance(beta, int) else (beta,)
        return self.coeffs.get(beta, self._zero_coeff())

    def items(self):
        return sorted(self.coeffs.items())

    def constant_term(self):
        return self[(0,) * self.shape.nfactors]

    def truncate(self, cutoff):
        if cutoff > self.cutoff:
            raise SeriesError(f"cannot extend a series from cutoff {self.cutoff} to {cutoff}")
        return type(self)._raw(self.shape, cutoff,
                               {b: c for b, c in self.coeffs.items() if sum(b) <= cutoff})

    def map_coeffs(self, fn):
        return type(self)(self.shape, self.cutoff, {b: fn(c) for b, c in self.coeffs.items()})

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, _Series):
            return NotImplemented
        self._check(other)
        cls = QSeries if QSeries in (type(self), type(other)) else ScalarQSeries
        out = {}
        for src in (self, other):
            for b, c in src.coeffs.items():
                if cls is QSeries and isinstance(c, LaurentScalar):
                    c = CohElement.scalar(self.shape, c)
                out[b] = out[b] + c if b in out else c
        return cls(self.shape, self.cutoff, out)

    def __neg__(self):
        return type(self)._raw(self.shape, self.cutoff, {b: -c for b, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, _Series):
            return series_mul(self, other)
        return self.map_coeffs(lambda c: c * other)

    def __rmul__(self, other):
        return self.map_coeffs(lambda c: other * c if isinstance(c, LaurentScalar) else c * other)

    def __eq__(self, other):
        if not isinstance(other, _Series):
            return NotImplemented
        if self.shape != other.shape or self.cutoff != other.cutoff:
            return False
        if type(self) is type(other):
            return self.coeffs == other.coeffs
        return _as_qseries(self).coeffs == _as_qseries(other).coeffs

    def __hash__(self):
        return hash((self.shape, self.cutoff, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def exp(self):
        """``sum f^k / k!``; requires a zero constant term."""
        if self.constant_term():
            raise SeriesError(f"exp needs a zero constant term, got {self.constant_term()}")
        result = type(self).one(self.shape, self.cutoff)
        power = result
        for k in range(1, self.cutoff + 1):
            power = series_mul(power, self)
            if not power:
                break
            result = result + power * Fraction(1, factorial(k))
        return result

    def weighted_degrees(self, weights):
        """Set of total degrees of all stored terms with ``deg q_i = weights[i]``."""
        out = set()
        for b, c in self.coeffs.items():
            wb = sum(w * d for w, d in zip(weights, b))
            out |= {wb + d for d in c.degrees()}
        return out


class QSeries(_Series):
    """Series with cohomology-valued coefficients."""

    def _coerce(self, c):
        if isinstance(c, CohElement):
            if c.shape != self.shape:
                raise SeriesError(f"coefficient shape {c.shape} does not match {self.shape}")
            return c
        return CohElement.scalar(self.shape, LaurentScalar.coerce(c))

    def _zero_coeff(self):
        return CohElement.zero(self.shape)

    def hbar_slice(self, k):
        return hbar_slice(self, k)

    def hbar_exponents(self):
        out = set()
        for c in self.coeffs.values():
            out |= c.hbar_exponents()
        return out

    def lambda_limit(self):
        return self.map_coeffs(lambda c: c.lambda_limit())

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "shape": list(self.shape.dims),
            "terms": [{"beta": list(b), "coeff": c.to_records()} for b, c in self.items()],
        }

    @classmethod
    def from_dict(cls, data):
        shape = SpaceShape(tuple(data["shape"]))
        return cls(shape, data["cutoff"],
                   {tuple(t["beta"]): CohElement.from_records(shape, t["coeff"]) for t in data["terms"]})

    def __repr__(self):
        return f"QSeries({self.shape.dims}, cutoff={self.cutoff}, {len(self.coeffs)} terms)"

    def __str__(self):
        return _render(self)


class ScalarQSeries(_Series):
    """Series with p-free coefficients (rational functions of lambda, hbar)."""

    def _coerce(self, c):
        if isinstance(c, CohElement):
            if not c.is_scalar():
                raise SeriesError(f"scalar series coefficient has divisor terms: {c}")
            return c.scalar_part()
        return LaurentScalar.coerce(c)

    def _zero_coeff(self):
        return LaurentScalar()

    def to_coh(self):
        return QSeries._raw(self.shape, self.cutoff,
                            {b: CohElement.scalar(self.shape, c) for b, c in self.coeffs.items()})

    def to_records(self):
        """``[{beta, lambda_exp, num, den}]``; the series must be hbar-free."""
        rows = []
        for b, c in self.items():
            for (a, lam), v in c.sorted_terms():
                if a:
                    raise SeriesError(f"series coefficient at {b} is not hbar-free: {c}")
                v = Fraction(v)
                rows.append({"beta": list(b), "lambda_exp": lam, "num": v.numerator, "den": v.denominator})
        return rows

    @classmethod
    def from_records(cls, shape, cutoff, rows):
        coeffs = {}
        for r in rows:
            b = tuple(r["beta"])
            coeffs[b] = coeffs.get(b, LaurentScalar()) + LaurentScalar.monomial(
                Fraction(r["num"], r["den"]), lam=r["lambda_exp"])
        return cls(shape, cutoff, coeffs)

    def __repr__(self):
        return f"ScalarQSeries({self.shape.dims}, cutoff={self.cutoff}, {len(self.coeffs)} terms)"

    def __str__(self):
        return _render(self)


def _as_qseries(s):
    return s.to_coh() if isinstance(s, ScalarQSeries) else s


def _render(s):
    if not s.coeffs:
        return "0"
    single = s.shape.nfactors == 1
    parts = []
    for b, c in s.items():
        if not any(b):
            q = ""
        elif single:
            q = "q" if b[0] == 1 else f"q^{b[0]}"
        else:
            q = "*".join(f"q{i + 1}" + ("" if d == 1 else f"^{d}") for i, d in enumerate(b) if d)
        parts.append(f"({c})" + (f"*{q}" if q else ""))
    return " + ".join(parts)


def series_mul(a, b):
    """Cauchy product truncated at the common cutoff."""
    a._check(b)
    cls = QSeries if QSeries in (type(a), type(b)) else ScalarQSeries
    cutoff = a.cutoff
    acc = {}
    b_items = [(bb, sum(bb), cb) for bb, cb in b.coeffs.items()]
    for ba, ca in a.coeffs.items():
        room = cutoff - sum(ba)
        for bb, kb, cb in b_items:
            if kb > room:
                continue
            if isinstance(ca, LaurentScalar) and isinstance(cb, CohElement):
                term = cb * ca
            else:
                term = ca * cb
            beta = _add_beta(ba, bb)
            acc[beta] = acc[beta] + term if beta in acc else term
    return cls(a.shape, cutoff, acc)


def series_exp(f):
    return f.exp()


def series_log(f):
    """``sum (-1)^{k+1} (f-1)^k / k``; requires constant term 1."""
    if f.constant_term() != 1:
        raise SeriesError(f"log needs constant term 1, got {f.constant_term()}")
    g = f - type(f).one(f.shape, f.cutoff)
    result = type(f).zero(f.shape, f.cutoff)
    power = type(f).one(f.shape, f.cutoff)
    for k in range(1, f.cutoff + 1):
        power = series_mul(power, g)
        if not power:
            break
        result = result + power * Fraction((-1) ** (k + 1), k)
    return result


def rescale_q(a, f):
    """Substitute ``q_i -> q_i exp(f_i)``.

    Uses ``q^beta -> q^beta exp(sum_i d_i f_i)`` term by term.
    """
    nvars = a.shape.nfactors
    if len(f) != nvars:
        raise SeriesError(f"need {nvars} rescaling series, got {len(f)}")
    for fi in f:
        a._check(fi)
        if fi.constant_term():
            raise SeriesError("rescaling series must have zero constant term")
    if not any(f):
        return a
    cutoff = a.cutoff
    # exp(f_i)^d reused across classes
    exps = [fi.exp() for fi in f]
    powers = [[ScalarQSeries.one(a.shape, cutoff)] for _ in range(nvars)]
    out = {}
    for beta, c in a.coeffs.items():
        room = cutoff - sum(beta)
        factor = None
        for i, d in enumerate(beta):
            while len(powers[i]) <= d:
                powers[i].append(series_mul(powers[i][-1], exps[i]))
            if d:
                factor = powers[i][d] if factor is None else series_mul(factor, powers[i][d])
        if factor is None:
            out[beta] = out[beta] + c if beta in out else c
            continue
        for gamma, s in factor.coeffs.items():
            if sum(gamma) > room:
                continue
            target = _add_beta(beta, gamma)
            term = c * s
            out[target] = out[target] + term if target in out else term
    return type(a)(a.shape, cutoff, out)


def hbar_slice(a, k):
    """Per class, the hbar-free coefficient of ``h^k``."""
    return type(a)(a.shape, a.cutoff, {b: c.hbar_slice(k) for b, c in a.coeffs.items()})


__all__ = [
    "QSeries", "ScalarQSeries", "series_mul", "series_exp", "series_log",
    "rescale_q", "hbar_slice", "classes_of_degree", "classes_up_to",
]
