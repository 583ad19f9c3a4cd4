"""Floquet stability raster over the (a, eps) plane."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .floquet import DEFAULT_STEPS, DEFAULT_TOL, classify_batch
from ._parallel import pmap

__all__ = ["ChartCell", "ChartGrid", "compute_chart"]


@dataclass(frozen=True)
class ChartCell:
    a: float
    eps: float
    classification: str  # stable | unstable | boundary | overflow
    growth_rate: float
    re_delta: float
    im_delta: float


@dataclass
class ChartGrid:
    """Cells are row-major: ``eps`` is the slow index, ``a`` the fast one."""

    a_min: float
    a_max: float
    a_steps: int
    eps_min: float
    eps_max: float
    eps_steps: int
    beta: float
    cells: list[ChartCell] = field(default_factory=list)

    @property
    def a_values(self) -> np.ndarray:
        return _axis(self.a_min, self.a_max, self.a_steps)

    @property
    def eps_values(self) -> np.ndarray:
        return _axis(self.eps_min, self.eps_max, self.eps_steps)

    def counts(self) -> dict[str, int]:
        out = {"stable": 0, "unstable": 0, "boundary": 0, "overflow": 0}
        for c in self.cells:
            out[c.classification] += 1
        return out


def _axis(lo, hi, n):
    # inclusive endpoints; a single step sits at the lower bound
    return np.linspace(lo, hi, n) if n > 1 else np.array([float(lo)])


def _chunk(job):
    a, eps, beta, steps, tol = job
    results, xs = classify_batch(a, eps, beta, steps, tol)
    out = []
    for ai, ei, r in zip(a, eps, results):
        if r is None:
            out.append(ChartCell(float(ai), float(ei), "overflow", math.nan, math.nan, math.nan))
        else:
            out.append(
                ChartCell(
                    float(ai),
                    float(ei),
                    r.classification.value,
                    float(r.growth_rate),
                    float(r.discriminant.real),
                    float(r.discriminant.imag),
                )
            )
    return out


def compute_chart(
    a_min: float,
    a_max: float,
    a_steps: int,
    eps_min: float,
    eps_max: float,
    eps_steps: int,
    beta: float,
    steps: int = DEFAULT_STEPS,
    tol: float = DEFAULT_TOL,
    jobs: int | None = 1,
) -> ChartGrid:
    if a_steps < 1 or eps_steps < 1:
        raise ParameterError("grid needs at least one step along each axis")
    if a_max < a_min or eps_max < eps_min:
        raise ParameterError("grid bounds must satisfy min <= max")
    if eps_min < 0 or beta < 0:
        raise ParameterError("eps and beta must be non-negative")
    grid = ChartGrid(a_min, a_max, int(a_steps), eps_min, eps_max, int(eps_steps), float(beta))
    ee, aa = np.meshgrid(grid.eps_values, grid.a_values, indexing="ij")
    a_flat, e_flat = aa.ravel(), ee.ravel()
    n_chunks = max(1, min(len(a_flat), 4 * (jobs or 1)))
    jobs_list = [
        (a_part, e_part, float(beta), steps, tol)
        for a_part, e_part in zip(np.array_split(a_flat, n_chunks), np.array_split(e_flat, n_chunks))
        if a_part.size
    ]
    for part in pmap(_chunk, jobs_list, jobs):
        grid.cells.extend(part)
    return grid
