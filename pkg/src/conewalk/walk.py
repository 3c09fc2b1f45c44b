"""Lazy Metropolis random walk over the parallelepiped partition of the normal fan.

Every normal cone of the (bounded) feasible polytope is tiled by translates
of the cell spanned by its basis rows scaled to length 1/n^2.  The walk moves
between facet-adjacent cells, weighting a cell P by

    f(P) = exp(-||z_P - alpha*c||_1) * (1/n^2)^n * |det(A_B)|

with z_P the cell center.  Crossing a cone facet is a simplex pivot, so the
walk drives the vertex bookkeeping for free.  As soon as the objective lies
in the current cone, the current basis is optimal and the walk stops.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import IO, NamedTuple

import numpy as np

from .errors import ConewalkError
from .geometry import det_abs
from .jsonio import json_line
from .lp import NormalizedLP
from .simplex import Basis, Vertex, basis_matrix, cone_membership, pivot_across_facet

Direction = tuple[int, int]  # (basis row, +1 outward / -1 toward the facet)


@dataclass(frozen=True)
class Parallelepiped:
    """One grid cell: a basis plus lattice coordinates along its rays."""

    basis: Basis
    index: tuple[int, ...]  # aligned with the sorted basis, entries >= 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(sorted(self.basis)))
        object.__setattr__(self, "index", tuple(int(k) for k in self.index))
        if len(self.index) != len(self.basis):
            raise ValueError("index length must match basis size")
        if any(k < 0 for k in self.index):
            raise ValueError("index entries must be non-negative")

    def coordinate(self, row: int) -> int:
        return self.index[self.basis.index(row)]


@dataclass(frozen=True)
class WalkConfig:
    """Walk parameters.  alpha=None / steps=None resolve from (n, delta)."""

    alpha: float | None = None
    steps: int | None = None
    seed: int = 0
    step_constant: float = 1.0
    trace: IO[str] | None = None

    def resolved(self, n: int, delta: float | None) -> "WalkConfig":
        """Fill in the auto fields; requires delta when any field is auto."""
        alpha, steps = self.alpha, self.steps
        if alpha is None or steps is None:
            if delta is None:
                raise ValueError("delta is required to resolve auto walk parameters")
            if alpha is None:
                alpha = default_alpha(n, delta)
            if steps is None:
                steps = default_steps(n, delta, self.step_constant)
        if delta is not None and alpha < 2.0 * n**3 / delta:
            warnings.warn(
                f"alpha={alpha:g} is below 2*n^3/delta={2 * n**3 / delta:g}; "
                "the failure-probability guarantee degrades", stacklevel=2)
        if steps < 0:
            raise ValueError("steps must be >= 0")
        return replace(self, alpha=float(alpha), steps=int(steps))


class WalkState(NamedTuple):
    vertex: Vertex
    cell: Parallelepiped


@dataclass
class WalkOutcome:
    final: Parallelepiped
    c_prime: np.ndarray
    current_vertex: Vertex
    stopped_with_c_in_cone: bool
    steps_taken: int = 0
    pivots: int = 0
    accepted_moves: int = 0
    rejected_moves: int = 0
    lazy_stays: int = 0

    def counters_consistent(self) -> bool:
        return self.accepted_moves + self.rejected_moves + self.lazy_stays \
            == self.steps_taken


@dataclass
class StepInfo:
    direction: Direction
    proposal: Parallelepiped
    accepted: bool
    pivoted: bool
    lazy: bool
    log_weight: float
    log_weight_proposal: float


def default_alpha(n: int, delta: float) -> float:
    """Objective scaling that makes the stationary failure mass negligible."""
    return 4.0 * n**3 / delta


def default_steps(n: int, delta: float, step_constant: float = 1.0) -> int:
    """Step budget ceil(C * n^5.5 / delta^3)."""
    if not (n >= 1 and 0.0 < delta <= 1.0 and step_constant > 0.0):
        raise ValueError("need n >= 1, 0 < delta <= 1, C > 0")
    return math.ceil(step_constant * n**5.5 / delta**3)


def center(lp: NormalizedLP, cell: Parallelepiped) -> np.ndarray:
    """Cell center: sum over basis rows of (k_i + 1/2)/n^2 * a_i."""
    coeffs = (np.array(cell.index, dtype=float) + 0.5) / lp.n**2
    return basis_matrix(lp, cell.basis).T @ coeffs


def log_volume(lp: NormalizedLP, basis: Basis) -> float:
    det = det_abs(basis_matrix(lp, basis))
    if det <= 0.0:
        raise ConewalkError(f"basis {basis} is singular")
    return math.log(det) - 2.0 * lp.n * math.log(lp.n)


def log_weight(lp: NormalizedLP, alpha: float, cell: Parallelepiped, *,
               _log_vol: float | None = None) -> float:
    """log f(cell); never underflows, unlike weight()."""
    z = center(lp, cell)
    lv = log_volume(lp, cell.basis) if _log_vol is None else _log_vol
    return -float(np.sum(np.abs(z - alpha * lp.c))) + lv


def weight(lp: NormalizedLP, alpha: float, cell: Parallelepiped) -> float:
    """f(cell) = exp(-||z - alpha*c||_1) * vol(cell).  May underflow to 0."""
    lw = log_weight(lp, alpha, cell)
    return math.exp(lw) if lw > -745.0 else 0.0


class _WalkCache:
    """Per-walk memo: basis-level quantities and pivot results."""

    def __init__(self, lp: NormalizedLP):
        self.lp = lp
        self.log_vol: dict[Basis, float] = {}
        self.c_inside: dict[Basis, bool] = {}
        self.pivots: dict[tuple[Basis, int], Vertex] = {}
        self.rows: dict[Basis, np.ndarray] = {}

    def log_volume(self, basis: Basis) -> float:
        lv = self.log_vol.get(basis)
        if lv is None:
            lv = self.log_vol[basis] = log_volume(self.lp, basis)
        return lv

    def scaled_rows(self, basis: Basis) -> np.ndarray:
        """Cell edge vectors a_i / n^2, one per basis row (sorted order)."""
        rows = self.rows.get(basis)
        if rows is None:
            rows = self.rows[basis] = \
                np.ascontiguousarray(self.lp.A[list(basis)]) / self.lp.n**2
        return rows

    def objective_in_cone(self, basis: Basis) -> bool:
        inside = self.c_inside.get(basis)
        if inside is None:
            inside = self.c_inside[basis] = cone_membership(
                self.lp, basis, self.lp.c).inside
        return inside

    def pivot(self, vertex: Vertex, leaving: int) -> Vertex:
        key = (vertex.basis, leaving)
        out = self.pivots.get(key)
        if out is None:
            out = self.pivots[key] = pivot_across_facet(self.lp, vertex, leaving)
        return out


def neighbor(lp: NormalizedLP, v: Vertex, cell: Parallelepiped,
             direction: Direction, *, _cache: _WalkCache | None = None,
             ) -> tuple[Parallelepiped, Vertex, bool]:
    """The facet-adjacent cell in the given direction.

    Moving inward (-1) at lattice coordinate 0 crosses the cone facet: the
    vertex pivots, and the shared-facet grid identifies the new cell's
    coordinates (staying rows keep theirs, the entering row starts at 0).
    """
    row, sign = direction
    pos = cell.basis.index(row)
    k = cell.index[pos]
    if sign > 0 or k > 0:
        new_index = list(cell.index)
        new_index[pos] += sign
        return Parallelepiped(cell.basis, tuple(new_index)), v, False

    v_new = _cache.pivot(v, row) if _cache is not None \
        else pivot_across_facet(lp, v, row)
    coords = dict(zip(cell.basis, cell.index))
    new_index = tuple(coords.get(r, 0) for r in v_new.basis)
    return Parallelepiped(v_new.basis, new_index), v_new, True


def _accepts(u: float, dlog: float) -> bool:
    """Lazy Metropolis rule: move iff u < (1/2) * min(1, exp(dlog))."""
    return math.log(2.0 * u) < min(0.0, dlog)


def step(lp: NormalizedLP, cfg: WalkConfig, state: WalkState,
         rng: np.random.Generator, *, _cache: _WalkCache | None = None,
         ) -> tuple[WalkState, StepInfo]:
    """One lazy Metropolis step.

    Picks one of the 2n facet neighbors uniformly, then moves there with
    probability (1/2) * min(1, f(P')/f(P)), evaluated in log space.
    """
    if cfg.alpha is None:
        raise ValueError("walk config must be resolved before stepping")
    cache = _cache if _cache is not None else _WalkCache(lp)
    v, cell = state
    n = lp.n

    choice = int(rng.integers(0, 2 * n))
    direction = (cell.basis[choice // 2], +1 if choice % 2 == 0 else -1)
    proposal, v_new, pivoted = neighbor(lp, v, cell, direction, _cache=cache)

    lw = log_weight(lp, cfg.alpha, cell, _log_vol=cache.log_volume(cell.basis))
    lw_new = log_weight(lp, cfg.alpha, proposal,
                        _log_vol=cache.log_volume(proposal.basis))

    u = float(rng.random())
    if u >= 0.5:
        lazy, accepted = True, False
    else:
        accepted = _accepts(u, lw_new - lw)
        lazy = False

    info = StepInfo(direction=direction, proposal=proposal, accepted=accepted,
                    pivoted=pivoted and accepted, lazy=lazy,
                    log_weight=lw, log_weight_proposal=lw_new)
    if accepted:
        return WalkState(v_new, proposal), info
    return state, info


_RESYNC_INTERVAL = 4096  # exact center recomputation, bounds float drift


def run_walk(lp: NormalizedLP, cfg: WalkConfig, start: Vertex, *,
             delta: float | None = None) -> WalkOutcome:
    """Run the walk from the apex cell of the start vertex's cone.

    Each iteration first stops if the objective lies in the current cone
    (the current basis is then optimal); otherwise it performs one step.
    The membership test is applied once more after the final step.

    The loop is an inlined equivalent of step(): one direction draw and one
    coin per iteration in the same order, with the cell center and its
    l1 distance to alpha*c maintained incrementally.
    """
    cfg = cfg.resolved(lp.n, delta)
    if lp.n < 4:
        warnings.warn(f"n={lp.n} < 4: the neighboring-cell weight-ratio bound "
                      "degrades; the walk itself is unaffected", stacklevel=2)
    rng = np.random.default_rng(cfg.seed)
    cache = _WalkCache(lp)
    n = lp.n
    ac = cfg.alpha * lp.c
    tracing = cfg.trace is not None

    vertex = start
    basis = start.basis
    index = [0] * n
    z = center(lp, Parallelepiped(basis, tuple(index)))
    l1 = float(np.sum(np.abs(z - ac)))
    log_vol = cache.log_volume(basis)
    out = WalkOutcome(final=Parallelepiped(basis, tuple(index)),
                      c_prime=np.zeros(n), current_vertex=start,
                      stopped_with_c_in_cone=False)

    for it in range(cfg.steps + 1):
        if cache.objective_in_cone(basis):
            out.stopped_with_c_in_cone = True
            break
        if it == cfg.steps:
            break

        choice = int(rng.integers(0, 2 * n))
        u = float(rng.random())
        pos = choice // 2
        sign = +1 if choice % 2 == 0 else -1
        row = basis[pos]
        lazy = u >= 0.5
        out.steps_taken += 1

        if lazy and not tracing:
            out.lazy_stays += 1
            continue

        pivot_move = sign < 0 and index[pos] == 0
        if not pivot_move:
            z_new = z + sign * cache.scaled_rows(basis)[pos]
            l1_new = float(np.sum(np.abs(z_new - ac)))
            dlog = l1 - l1_new
            new_vertex, new_basis, log_vol_new = vertex, basis, log_vol
            new_index = None
        else:
            new_vertex = cache.pivot(vertex, row)
            new_basis = new_vertex.basis
            coords = dict(zip(basis, index))
            new_index = [coords.get(r, 0) for r in new_basis]
            rows = cache.scaled_rows(new_basis)
            z_new = rows.T @ (np.array(new_index, dtype=float) + 0.5)
            l1_new = float(np.sum(np.abs(z_new - ac)))
            log_vol_new = cache.log_volume(new_basis)
            dlog = (l1 - l1_new) + (log_vol_new - log_vol)
        lw_before = -l1 + log_vol
        lw_proposal = -l1_new + log_vol_new

        accepted = not lazy and _accepts(u, dlog)
        if accepted:
            if pivot_move:
                vertex, basis, log_vol = new_vertex, new_basis, log_vol_new
                index = new_index
                out.pivots += 1
            else:
                index[pos] += sign
            z, l1 = z_new, l1_new
            out.accepted_moves += 1
        elif lazy:
            out.lazy_stays += 1
        else:
            out.rejected_moves += 1

        if out.steps_taken % _RESYNC_INTERVAL == 0:
            z = center(lp, Parallelepiped(basis, tuple(index)))
            l1 = float(np.sum(np.abs(z - ac)))

        if tracing:
            cfg.trace.write(json_line({
                "step": out.steps_taken,
                "basis": list(basis),
                "k": list(index),
                "direction": [row, sign],
                "log_weight": lw_before,
                "log_weight_proposal": lw_proposal,
                "accepted": accepted,
                "pivoted": accepted and pivot_move,
            }))

    out.final = Parallelepiped(basis, tuple(index))
    out.current_vertex = vertex
    out.c_prime = center(lp, out.final) / cfg.alpha
    return out
