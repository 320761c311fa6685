"""Independent expansion route: closed-form rational expressions in sympy,
Taylor-expanded in the divisor classes and converted to CohElement.

Nothing here uses the package's arithmetic; only the final containers.
"""

from fractions import Fraction

import sympy as sp

from concavex.algebra import CohElement, LaurentScalar, SpaceShape

h, l = sp.symbols("h l")
p = sp.Symbol("p")
p1, p2 = sp.symbols("p1 p2")


def divisors(nfactors):
    return sp.symbols(f"p1:{nfactors + 1}") if nfactors > 1 else (sp.Symbol("p"),)


def to_scalar(expr):
    """Laurent scalar from a rational function whose denominator is a monomial."""
    expr = sp.together(sp.expand(expr))
    num, den = sp.fraction(expr)
    den_poly = sp.Poly(den, h, l)
    if len(den_poly.terms()) != 1:
        raise ValueError(f"denominator {den} is not a monomial")
    (da, db), dc = den_poly.terms()[0]
    out = {}
    if num == 0:
        return LaurentScalar()
    for (a, b), c in sp.Poly(sp.expand(num), h, l).terms():
        c = sp.Rational(c) / sp.Rational(dc)
        out[(a - da, b - db)] = Fraction(int(c.p), int(c.q))
    return LaurentScalar(out)


def _truncate(expr, ps, dims):
    poly = sp.Poly(sp.expand(expr), *ps)
    return sum((c * sp.Mul(*[q ** k for q, k in zip(ps, e)])
                for e, c in poly.terms() if all(k <= n for k, n in zip(e, dims))), sp.Integer(0))


def _series(factor, ps, dims):
    """One factor ``base**e`` as a polynomial in ``ps`` modulo ``p_i^(n_i+1)``."""
    base, e = factor.as_base_exp()
    if not (e.is_Integer and e < 0 and base.free_symbols & set(ps)):
        return _truncate(factor, ps, dims)
    c = base.subs({q: 0 for q in ps})
    rest = sp.expand(base - c)
    inv, power = sp.Integer(0), sp.Integer(1)
    for j in range(sum(dims) + 1):
        inv += power / c ** (j + 1)
        power = _truncate(-power * rest, ps, dims)
    out = sp.Integer(1)
    for _ in range(-e):
        out = _truncate(out * inv, ps, dims)
    return out


def expand(expr, dims):
    """CohElement for ``expr(p_1..p_l, h, l)`` on ``P^{dims}``, where ``expr``
    is a product of powers of polynomials with p-free constant terms."""
    ps = divisors(len(dims))
    acc = sp.Integer(1)
    for factor in sp.Mul.make_args(sp.sympify(expr)):
        acc = _truncate(acc * _series(factor, ps, dims), ps, dims)
    terms = {}
    for e, c in sp.Poly(acc, *ps).terms():
        s = to_scalar(c)
        if s:
            terms[e] = s
    return CohElement(SpaceShape(tuple(dims)), terms)
