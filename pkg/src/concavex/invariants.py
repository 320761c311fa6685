"""Enumerative numbers read off the J-function.

For ``beta != 0`` the pairing ``<J_beta, 1>`` has leading term
``-2 K_beta / h^3``; ``K_beta`` is the virtual count over the moduli space
without markings.  Multiple covers are stripped with the ``1/k^3`` kernel.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .algebra import CohElement, LaurentScalar, lambda_limit, rational
from .errors import LambdaPole
from .geometry import pairing
from .qseries import classes_up_to

EXACT_LIMIT = "exact-limit"
LAMBDA_FREE = "lambda-free"
EQUIVARIANT_ONLY = "equivariant-only"


def j_pairing(J, spec, beta, equivariant=True):
    """``<J_beta, 1>`` as a Laurent scalar in hbar and lambda."""
    beta = tuple(beta)
    if sum(beta) > J.cutoff:
        raise ValueError(f"class {beta} lies beyond the cutoff {J.cutoff}")
    return pairing(J[beta], CohElement.one(J.shape), spec, equivariant)


def extract_K(s, equivariant=True):
    """``-(1/2) * [h^-3]`` of the lambda -> 0 limit of ``s``.

    Returns ``(K, status)``.  When the limit has a pole, ``K`` is the
    hbar^-3 part still carrying lambda (a :class:`LaurentScalar`).
    """
    try:
        limit = lambda_limit(s)
    except LambdaPole:
        return s.hbar_slice(-3) * Fraction(-1, 2), EQUIVARIANT_ONLY
    status = EXACT_LIMIT if equivariant else LAMBDA_FREE
    return rational(Fraction(limit.coefficient(-3, 0)) * Fraction(-1, 2)), status


@dataclass(frozen=True)
class InvariantRow:
    beta: tuple
    K: object
    lambda_status: str

    def to_dict(self):
        out = {"beta": list(self.beta), "lambda_status": self.lambda_status}
        if isinstance(self.K, LaurentScalar):
            out["K"] = self.K.to_records()
        else:
            k = Fraction(self.K)
            out["K_num"] = k.numerator
            out["K_den"] = k.denominator
        return out

    @classmethod
    def from_dict(cls, data):
        if "K" in data:
            k = LaurentScalar.from_records(data["K"])
        else:
            k = rational(Fraction(data["K_num"], data["K_den"]))
        return cls(tuple(data["beta"]), k, data["lambda_status"])


@dataclass(frozen=True)
class InvariantTable:
    rows: tuple

    def by_degree(self):
        """``{d: K}`` for single-factor tables."""
        return {row.beta[0]: row.K for row in self.rows}

    def values(self):
        return [row.K for row in self.rows]

    def to_dict(self):
        return {"rows": [row.to_dict() for row in self.rows]}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(InvariantRow.from_dict(r) for r in data["rows"]))

    def to_csv(self):
        """Columns ``beta, K_num, K_den, lambda_status``.  Rows that only
        exist equivariantly leave ``K_num``/``K_den`` empty."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["beta", "K_num", "K_den", "lambda_status"])
        for row in self.rows:
            beta = ",".join(str(d) for d in row.beta)
            if isinstance(row.K, LaurentScalar):
                writer.writerow([beta, "", "", row.lambda_status])
            else:
                k = Fraction(row.K)
                writer.writerow([beta, k.numerator, k.denominator, row.lambda_status])
        return buf.getvalue()


def invariant_table(J, spec, equivariant=True):
    rows = []
    for beta in classes_up_to(J.shape.nfactors, J.cutoff):
        if not any(beta):
            continue
        K, status = extract_K(j_pairing(J, spec, beta, equivariant), equivariant)
        rows.append(InvariantRow(beta, K, status))
    return InvariantTable(tuple(rows))


def multiple_cover_table(spec, cutoff, equivariant=True):
    """``K_beta`` for ``1 <= |beta| <= cutoff`` through the full pipeline."""
    from .pipeline import run_pipeline

    return run_pipeline(spec, cutoff, equivariant=equivariant).table


def multiple_cover_sum(n):
    """Forward map ``K_d = sum_{k | d} n_{d/k} / k^3`` (``n[0]`` is ``n_1``)."""
    out = []
    for d in range(1, len(n) + 1):
        out.append(rational(sum(Fraction(n[d // k - 1]) / k ** 3 for k in range(1, d + 1) if d % k == 0)))
    return out


def instanton_inversion(K):
    """Unique ``n_d`` with ``K_d = sum_{k | d} n_{d/k} / k^3`` (``K[0]`` is ``K_1``)."""
    n = []
    for d in range(1, len(K) + 1):
        covers = sum(Fraction(n[d // k - 1]) / k ** 3 for k in range(2, d + 1) if d % k == 0)
        n.append(rational(Fraction(K[d - 1]) - covers))
    return n
