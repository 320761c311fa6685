"""End-to-end run: I-function, mirror solve, J-function, invariant table."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PolarityError
from .ifunction import build_I
from .invariants import InvariantTable, invariant_table
from .mirror import MirrorData, apply_mirror, solve_mirror
from .qseries import QSeries


@dataclass(frozen=True)
class PipelineResult:
    spec: object
    I: QSeries
    mirror: MirrorData
    J: QSeries
    table: InvariantTable
    equivariant: bool


def run_pipeline(spec, cutoff, equivariant=True):
    """Run every stage for ``spec`` up to total q-degree ``cutoff``.

    ``equivariant=False`` sets lambda to zero before the mirror solve; only
    convex bundles allow it since concave Euler factors need lambda inverted.
    """
    if not equivariant and not spec.is_convex:
        raise PolarityError("the non-equivariant path needs a convex bundle; concave factors need lambda")
    I = build_I(spec, cutoff, equivariant=equivariant)
    m = solve_mirror(I, spec)
    J = apply_mirror(I, m)
    table = invariant_table(J, spec, equivariant=equivariant)
    return PipelineResult(spec, I, m, J, table, equivariant)
