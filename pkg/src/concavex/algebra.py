"""Exact coefficient arithmetic.

Two layers:

* :class:`LaurentScalar` -- finite sums ``c * h^a * l^b`` with rational ``c``
  and integer (possibly negative) exponents.  ``h`` is the descendant
  parameter hbar, ``l`` the weight lambda of the fiberwise torus.
* :class:`CohElement` -- polynomials in the hyperplane classes
  ``p_1..p_l`` of ``P^{n_1} x ... x P^{n_l}`` truncated by ``p_i^{n_i+1} = 0``,
  with :class:`LaurentScalar` coefficients.

Rationals are :class:`fractions.Fraction`; integral values are stored as
plain ``int`` which compares and hashes identically.  Floats are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import LambdaPole, NonMonomialUnit, ShapeMismatch

INHOMOGENEOUS = "inhomogeneous"


def rational(c):
    """Coerce ``c`` to an exact rational (``int`` when integral)."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return int(c)
    if isinstance(c, _RationalABC):
        return rational(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return rational(Fraction(c))
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


def _fmt_rational(c):
    return str(c)


class LaurentScalar:
    """Exact Laurent polynomial in hbar and lambda.

    ``terms`` maps ``(hbar_exp, lambda_exp)`` to a nonzero rational.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (a, b), c in dict(terms).items():
                c = rational(c)
                if c:
                    clean[(int(a), int(b))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, c=1, hbar=0, lam=0):
        return cls({(hbar, lam): c})

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentScalar):
            return x
        return cls.const(rational(x))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentScalar):
            try:
                other = LaurentScalar.coerce(other)
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = rational(v)
            else:
                out.pop(k, None)
        return LaurentScalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentScalar):
            try:
                other = LaurentScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentScalar):
            out = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
            return LaurentScalar._raw({k: rational(c) for k, c in out.items() if c})
        if isinstance(other, CohElement):
            return NotImplemented
        try:
            c = rational(other)
        except TypeError:
            return NotImplemented
        if not c:
            return LaurentScalar()
        return LaurentScalar._raw({k: rational(v * c) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentScalar):
            return self * other.inverse()
        return self * rational(Fraction(1) / rational(other))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentScalar.const(1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        if len(self.terms) != 1:
            raise NonMonomialUnit(f"non-monomial unit: cannot invert {self}")
        ((a, b), c), = self.terms.items()
        return LaurentScalar._raw({(-a, -b): rational(Fraction(1) / c)})

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentScalar):
            return self.terms == other.terms
        if isinstance(other, CohElement):
            return NotImplemented
        try:
            return self.terms == LaurentScalar.coerce(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if set(self.terms) == {(0, 0)}:
            return hash(self.terms[(0, 0)])
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    def coefficient(self, hbar=0, lam=0):
        return self.terms.get((hbar, lam), 0)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant(self):
        """Rational value of a constant scalar."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((0, 0), 0)

    def hbar_exponents(self):
        return {a for a, _ in self.terms}

    def lambda_exponents(self):
        return {b for _, b in self.terms}

    def is_lambda_free(self):
        return all(b == 0 for _, b in self.terms)

    def hbar_slice(self, k):
        """Coefficient of ``h^k`` as an hbar-free scalar."""
        return LaurentScalar._raw({(0, b): c for (a, b), c in self.terms.items() if a == k})

    def degrees(self):
        return {a + b for a, b in self.terms}

    def lambda_limit(self):
        return lambda_limit(self)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_records(self):
        return [
            {"h_exp": a, "lambda_exp": b, "num": Fraction(c).numerator, "den": Fraction(c).denominator}
            for (a, b), c in self.sorted_terms()
        ]

    @classmethod
    def from_records(cls, records):
        return cls({(r["h_exp"], r["lambda_exp"]): Fraction(r["num"], r["den"]) for r in records})

    def __repr__(self):
        return f"LaurentScalar({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # highest hbar power first reads like an asymptotic expansion
        for (a, b), c in sorted(self.terms.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
            mono = []
            if a:
                mono.append("h" if a == 1 else f"h^{a}")
            if b:
                mono.append("l" if b == 1 else f"l^{b}")
            if not mono:
                parts.append(_fmt_rational(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(f"{_fmt_rational(c)}*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")


HBAR = LaurentScalar.monomial(1, hbar=1)
LAMBDA = LaurentScalar.monomial(1, lam=1)


def lambda_limit(s):
    """Specialize ``lambda = 0``.

    Raises :class:`LambdaPole` carrying the principal part when some term
    has a negative lambda exponent.
    """
    principal = {k: c for k, c in s.terms.items() if k[1] < 0}
    if principal:
        raise LambdaPole(f"pole at lambda=0: principal part {LaurentScalar._raw(principal)}",
                         LaurentScalar._raw(principal))
    return LaurentScalar._raw({k: c for k, c in s.terms.items() if k[1] == 0})


@dataclass(frozen=True)
class SpaceShape:
    """``P^{n_1} x ... x P^{n_l}``."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ValueError("a space needs at least one projective factor")
        if any(n < 1 for n in dims):
            raise ValueError(f"projective dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def nfactors(self):
        return len(self.dims)

    @property
    def zero_exps(self):
        return (0,) * len(self.dims)

    def unit_exps(self, i):
        e = [0] * len(self.dims)
        e[i] = 1
        return tuple(e)

    def monomials(self):
        """All multi-exponents ``0 <= e_i <= n_i`` in lexicographic order."""
        out = [()]
        for n in self.dims:
            out = [e + (k,) for e in out for k in range(n + 1)]
        return out

    def __str__(self):
        return " x ".join(f"P^{n}" for n in self.dims)


class CohElement:
    """Element of ``H^*(P^{n_1} x ... x P^{n_l}) (x) Q[h^+-, l^+-]``.

    ``terms`` maps multi-exponents ``(e_1..e_l)`` to nonzero
    :class:`LaurentScalar` coefficients.  Monomials violating
    ``e_i <= n_i`` are discarded on construction.
    """

    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms=None):
        if not isinstance(shape, SpaceShape):
            shape = SpaceShape(tuple(shape))
        self.shape = shape
        clean = {}
        if terms:
            dims = shape.dims
            for e, s in dict(terms).items():
                e = tuple(int(x) for x in e)
                if len(e) != len(dims):
                    raise ShapeMismatch(f"exponent {e} does not fit {shape}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative divisor exponent {e}")
                if any(x > n for x, n in zip(e, dims)):
                    continue
                s = LaurentScalar.coerce(s)
                if s:
                    clean[e] = s
        self.terms = clean

    @classmethod
    def _raw(cls, shape, terms):
        obj = cls.__new__(cls)
        obj.shape = shape
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, shape):
        return cls(shape)

    @classmethod
    def one(cls, shape):
        return cls.scalar(shape, 1)

    @classmethod
    def scalar(cls, shape, s):
        if not isinstance(shape, SpaceShape):
            shape = SpaceShape(tuple(shape))
        return cls(shape, {shape.zero_exps: s})

    @classmethod
    def divisor(cls, shape, i, coeff=1):
        """``coeff * p_i`` (0-based ``i``)."""
        if not isinstance(shape, SpaceShape):
            shape = SpaceShape(tuple(shape))
        return cls(shape, {shape.unit_exps(i): coeff})

    @classmethod
    def monomial(cls, shape, exps, coeff=1):
        return cls(shape, {tuple(exps): coeff})

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape mismatch: {self.shape} vs {other.shape}")

    def _lift(self, other):
        if isinstance(other, CohElement):
            self._check(other)
            return other
        return CohElement.scalar(self.shape, LaurentScalar.coerce(other))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, s in other.terms.items():
            v = out[e] + s if e in out else s
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CohElement._raw(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return CohElement._raw(self.shape, {e: -s for e, s in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CohElement):
            try:
                s = LaurentScalar.coerce(other)
            except TypeError:
                return NotImplemented
            return self.scale(s)
        self._check(other)
        dims = self.shape.dims
        acc = {}
        for e1, s1 in self.terms.items():
            t1 = s1.terms.items()
            for e2, s2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if any(x > n for x, n in zip(e, dims)):
                    continue
                bucket = acc.get(e)
                if bucket is None:
                    bucket = acc[e] = {}
                t2 = s2.terms.items()
                for (a1, b1), c1 in t1:
                    for (a2, b2), c2 in t2:
                        k = (a1 + a2, b1 + b2)
                        bucket[k] = bucket.get(k, 0) + c1 * c2
        out = {}
        for e, bucket in acc.items():
            clean = {k: rational(c) for k, c in bucket.items() if c}
            if clean:
                out[e] = LaurentScalar._raw(clean)
        return CohElement._raw(self.shape, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if k < 0:
            return invert_unit(self) ** (-k)
        out = CohElement.one(self.shape)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, s):
        s = LaurentScalar.coerce(s)
        if not s:
            return CohElement.zero(self.shape)
        out = {}
        for e, t in self.terms.items():
            v = t * s
            if v:
                out[e] = v
        return CohElement._raw(self.shape, out)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CohElement):
            return self.shape == other.shape and self.terms == other.terms
        try:
            return self.terms == self._lift(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), LaurentScalar())

    def scalar_part(self):
        return self.coefficient(self.shape.zero_exps)

    def is_scalar(self):
        return all(not any(e) for e in self.terms)

    def map_scalars(self, fn):
        return CohElement(self.shape, {e: fn(s) for e, s in self.terms.items()})

    def hbar_slice(self, k):
        """Coefficient of ``h^k``; the result is hbar-free."""
        return self.map_scalars(lambda s: s.hbar_slice(k))

    def hbar_exponents(self):
        out = set()
        for s in self.terms.values():
            out |= s.hbar_exponents()
        return out

    def lambda_limit(self):
        return self.map_scalars(lambda_limit)

    def degrees(self):
        out = set()
        for e, s in self.terms.items():
            out |= {sum(e) + d for d in s.degrees()}
        return out

    def to_records(self):
        """Canonical serialization: records sorted by (p_exps, h_exp, lambda_exp)."""
        rows = []
        for e in sorted(self.terms):
            for (a, b), c in self.terms[e].sorted_terms():
                c = Fraction(c)
                rows.append({"p_exps": list(e), "h_exp": a, "lambda_exp": b,
                             "num": c.numerator, "den": c.denominator})
        return rows

    @classmethod
    def from_records(cls, shape, records):
        terms = {}
        for r in records:
            e = tuple(r["p_exps"])
            terms.setdefault(e, {})[(r["h_exp"], r["lambda_exp"])] = Fraction(r["num"], r["den"])
        return cls(shape, {e: LaurentScalar(t) for e, t in terms.items()})

    def __repr__(self):
        return f"CohElement({self.shape.dims}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        single = self.shape.nfactors == 1
        for e in sorted(self.terms):
            mono = []
            for i, x in enumerate(e):
                if x:
                    name = "p" if single else f"p{i + 1}"
                    mono.append(name if x == 1 else f"{name}^{x}")
            s = self.terms[e]
            if not mono:
                parts.append(str(s))
            elif s == 1:
                parts.append("*".join(mono))
            else:
                parts.append(f"({s})*" + "*".join(mono))
        return " + ".join(parts)


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def invert_unit(a):
    """Inverse of ``a`` whose p-degree-0 part is a nonzero scalar monomial.

    With ``a = u (1 + N)``, ``N`` nilpotent, the inverse is the terminating
    geometric series ``u^{-1} sum_k (-N)^k``.
    """
    u = a.scalar_part()
    if not u.is_monomial():
        raise NonMonomialUnit(f"non-monomial unit: scalar part of {a} is {u or 0}")
    u_inv = CohElement.scalar(a.shape, u.inverse())
    neg_n = -((a - CohElement.scalar(a.shape, u)) * u_inv)
    result = CohElement.one(a.shape)
    power = CohElement.one(a.shape)
    for _ in range(sum(a.shape.dims)):
        power = power * neg_n
        if not power:
            break
        result = result + power
    return result * u_inv


def integrate(a):
    """Coefficient of the top class ``prod p_i^{n_i}``."""
    return a.terms.get(a.shape.dims, LaurentScalar())


def degree(a):
    """Common degree of all monomials (deg p_i = deg h = deg l = 1).

    Returns ``INHOMOGENEOUS`` when monomials disagree and ``None`` for zero.
    """
    degs = a.degrees()
    if not degs:
        return None
    if len(degs) > 1:
        return INHOMOGENEOUS
    return degs.pop()
