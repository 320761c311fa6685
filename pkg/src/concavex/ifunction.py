"""Hypergeometric series: the ambient J-function and the twisted I-function."""

from __future__ import annotations

from .algebra import HBAR, CohElement, invert_unit
from .geometry import Polarity, c1_equivariant
from .qseries import QSeries, classes_up_to


def _factor_tables(shape, cutoff):
    """``tables[i][d] = prod_{m=1}^{d} (p_i + m h)^{-(n_i+1)}``."""
    tables = []
    for i, n in enumerate(shape.dims):
        p = CohElement.divisor(shape, i)
        row = [CohElement.one(shape)]
        for m in range(1, cutoff + 1):
            row.append(row[-1] * invert_unit(p + HBAR * m) ** (n + 1))
        tables.append(row)
    return tables


def ambient_j(shape, cutoff):
    """J-function of ``P^{n_1} x ... x P^{n_l}``, factor by factor."""
    tables = _factor_tables(shape, cutoff)
    coeffs = {}
    for beta in classes_up_to(shape.nfactors, cutoff):
        c = CohElement.one(shape)
        for i, d in enumerate(beta):
            if d:
                c = c * tables[i][d]
        coeffs[beta] = c
    return QSeries(shape, cutoff, coeffs)


def correcting_class(line, pol, beta, shape, equivariant=True):
    """Finite product of shifted Chern roots standing in for Euler(V_beta).

    Convex: ``m = 1 .. <c1(L), beta>``.  Concave: ``m = <c1(L), beta> + 1 .. 0``,
    which includes the ``m = 0`` factor ``c1(L) + lambda``.
    """
    k = line.pairing_with(beta)
    if not any(beta):
        return CohElement.one(shape)
    root = c1_equivariant(line, shape, equivariant)
    if pol is Polarity.CONVEX:
        ms = range(1, k + 1)
    else:
        ms = range(k + 1, 1)
    out = CohElement.one(shape)
    for m in ms:
        out = out * (root + HBAR * m)
    return out


def correcting_euler_class(spec, beta, equivariant=True):
    out = CohElement.one(spec.shape)
    for line, pol in spec.bundle:
        out = out * correcting_class(line, pol, beta, spec.shape, equivariant)
    return out


def build_I(spec, cutoff, equivariant=True, ambient=None):
    """``I = sum_beta q^beta J^X_beta H^V_beta``.

    ``equivariant=False`` drops lambda from the correcting classes; only
    meaningful for convex bundles, whose pairing needs no lambda inverse.
    """
    if ambient is None:
        ambient = ambient_j(spec.shape, cutoff)
    coeffs = {}
    for beta, jx in ambient.coeffs.items():
        coeffs[beta] = jx * correcting_euler_class(spec, beta, equivariant)
    return QSeries(spec.shape, cutoff, coeffs)
