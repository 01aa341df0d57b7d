"""AIRS placement: closed-form single-location optimum and grid search for area coverage."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .beamform import (
    Alignment,
    FlattenPlan,
    plan_flatten_3d,
    sub_array_count,
    worst_gain_approx_3d,
)
from .channel import ArrayGeometry, PhaseProfile, RadioParams, worst_snr
from .config import GRID, SEARCH
from .exceptions import InvalidInputError
from .geometry import Placement, TargetArea, freq_spans, max_dist_to_area

logger = logging.getLogger(__name__)


def parallel_map(fn: Callable, items: Sequence, workers: Optional[int] = None) -> List:
    """Order-preserving map over a thread pool (inline when workers <= 1)."""
    items = list(items)
    if not workers or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


class SingleLocationOptimum(NamedTuple):
    xi: Tuple[float, ...]
    candidates: Tuple[Placement, ...]


@dataclass(frozen=True)
class SearchRange:
    q_min: float
    q_max: float
    step: float = SEARCH['step']

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidInputError(f"search step must be > 0, got {self.step}")
        if not self.q_min < self.q_max:
            raise InvalidInputError(
                f"empty search range: q_min={self.q_min} must be below q_max={self.q_max}")

    @classmethod
    def default_for(cls, area: TargetArea, H: float) -> 'SearchRange':
        return cls(SEARCH['q_min_altitudes'] * H, area.center_x, SEARCH['step'])

    def clamped(self, area: TargetArea) -> 'SearchRange':
        """Restrict q_max to the area center, where the optimum always lies."""
        if self.q_max <= area.center_x:
            return self
        logger.warning("search q_max %.6g exceeds area center %.6g; clamping",
                       self.q_max, area.center_x)
        return SearchRange(self.q_min, area.center_x, self.step)

    def points(self) -> np.ndarray:
        n = int(math.floor((self.q_max - self.q_min) / self.step + 1e-9))
        pts = self.q_min + self.step * np.arange(n + 1)
        if self.q_max - pts[-1] > 1e-9:
            pts = np.append(pts, self.q_max)
        return pts


@dataclass(frozen=True, eq=False)
class PlacementResult:
    q_star: Placement
    worst_snr_linear: float
    worst_snr_approx: float
    L_used: Tuple[int, int]
    span: Tuple[float, float]
    objective: float
    worst_point: Tuple[float, float]
    plan_x: FlattenPlan
    plan_y: FlattenPlan
    phases: PhaseProfile
    objective_trace: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))


def optimal_placement_single(w1, H: float) -> SingleLocationOptimum:
    """Minimizers q = xi * w1 of (H^2 + ||q - w1||^2)(H^2 + ||q||^2), sorted by qx."""
    if not H > 0:
        raise InvalidInputError(f"H must be > 0, got {H}")
    wx, wy = (float(v) for v in w1)
    rho = math.hypot(wx, wy) / H
    if rho <= 2:
        xis = [0.5]
    else:
        r = math.sqrt(0.25 - 1.0 / rho ** 2)
        xis = [0.5 - r, 0.5 + r]
    pairs = sorted(((xi * wx, xi * wy, xi) for xi in xis), key=lambda p: (p[0], p[1]))
    return SingleLocationOptimum(
        xi=tuple(p[2] for p in pairs),
        candidates=tuple(Placement(p[0], p[1], H) for p in pairs),
    )


def deployment_coefficient(rho: float) -> Tuple[float, ...]:
    """xi*(rho): (0.5,) up to rho = 2, the two symmetric branches beyond."""
    if rho < 0:
        raise InvalidInputError(f"rho must be >= 0, got {rho}")
    if rho <= 2:
        return (0.5,)
    r = math.sqrt(0.25 - 1.0 / rho ** 2)
    return 0.5 - r, 0.5 + r


def single_location_snr(w1, H: float, N: int, M: int, rp: RadioParams) -> float:
    """Optimal SNR at w1 with conjugate phasing at the closed-form placement."""
    if not H > 0:
        raise InvalidInputError(f"H must be > 0, got {H}")
    norm = math.hypot(*(float(v) for v in w1))
    scale = rp.snr_scale * rp.ref_gain ** 2 * M * N ** 2
    if norm / H <= 2:
        return scale / (H ** 2 + 0.25 * norm ** 2) ** 2
    return scale / (H ** 2 * norm ** 2)


def upa_y_offset(geo: ArrayGeometry, rp: RadioParams) -> float:
    """q_y that centers the array over the x-axis (reference element is the bottom-left one)."""
    if geo.is_ula:
        return 0.0
    return -geo.ny * rp.spacing_y / 2.0


def _sub_array_counts(q: Placement, area: TargetArea, geo: ArrayGeometry, rp: RadioParams):
    (x_lo, x_hi), (y_lo, y_hi) = freq_spans(q, area)
    span_x, span_y = x_hi - x_lo, y_hi - y_lo
    Lx = sub_array_count(span_x, geo.nx, rp.wavelength_ratio_x)
    Ly = sub_array_count(span_y, geo.ny, rp.wavelength_ratio_y)
    return (Lx, Ly), (span_x, span_y)


def placement_objective(q: Placement, area: TargetArea, geo: ArrayGeometry,
                        rp: RadioParams) -> float:
    """L_x^2 L_y^2 (H^2 + d_max^2)(H^2 + ||q||^2); lower is better."""
    (Lx, Ly), _ = _sub_array_counts(q, area, geo, rp)
    d_max = max_dist_to_area(q, area)
    return float(Lx ** 2 * Ly ** 2 * (q.H ** 2 + d_max ** 2) * (q.H ** 2 + q.qx ** 2 + q.qy ** 2))


def placement_objective_ula(qx: float, area: TargetArea, geo: ArrayGeometry,
                            rp: RadioParams, H: float) -> float:
    if not geo.is_ula:
        raise InvalidInputError(f"ULA objective needs Ny = 1, got Ny={geo.ny}")
    return placement_objective(Placement(qx, 0.0, H), area, geo, rp)


def worst_path_loss(q: Placement, area: TargetArea) -> float:
    """Worst cascaded path loss (H^2 + d_max^2)(H^2 + ||q||^2) over the area."""
    d_max = max_dist_to_area(q, area)
    return float((q.H ** 2 + d_max ** 2) * (q.H ** 2 + q.qx ** 2 + q.qy ** 2))


def worst_snr_approx(q: Placement, area: TargetArea, geo: ArrayGeometry,
                     rp: RadioParams, alignment: Alignment = 'center') -> float:
    plan_x, plan_y, _ = plan_flatten_3d(q, area, geo, rp, alignment)
    gain = worst_gain_approx_3d(plan_x, plan_y)
    return rp.snr_scale * rp.ref_gain ** 2 * geo.source_antennas * gain / worst_path_loss(q, area)


def design_at(q: Placement, area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
              grid: Optional[Tuple[int, int]] = None, alignment: Alignment = 'center',
              objective_trace: Optional[np.ndarray] = None) -> PlacementResult:
    """Flatten design at a fixed placement with exact and approximate worst SNR."""
    grid = grid or (GRID['nx_pts'], GRID['ny_pts'])
    plan_x, plan_y, phases = plan_flatten_3d(q, area, geo, rp, alignment)
    exact, point = worst_snr(q, area, phases, geo, rp, grid)
    approx = (rp.snr_scale * rp.ref_gain ** 2 * geo.source_antennas
              * worst_gain_approx_3d(plan_x, plan_y) / worst_path_loss(q, area))
    span = (plan_x.delta_max - plan_x.delta_min, plan_y.delta_max - plan_y.delta_min)
    return PlacementResult(
        q_star=q,
        worst_snr_linear=exact,
        worst_snr_approx=float(approx),
        L_used=(plan_x.L, plan_y.L),
        span=span,
        objective=placement_objective(q, area, geo, rp),
        worst_point=point,
        plan_x=plan_x,
        plan_y=plan_y,
        phases=phases,
        objective_trace=np.empty((0, 2)) if objective_trace is None else objective_trace,
    )


def _search(area: TargetArea, geo: ArrayGeometry, rp: RadioParams, search: SearchRange,
            H: float, qy: float, grid, alignment, workers) -> PlacementResult:
    search = search.clamped(area)
    qxs = search.points()
    costs = np.array(parallel_map(
        lambda qx: placement_objective(Placement(float(qx), qy, H), area, geo, rp),
        qxs, workers))
    # argmin returns the first, i.e. smallest, qx among ties
    k = int(np.argmin(costs))
    q_star = Placement(float(qxs[k]), qy, H)
    logger.info("placement search over %d points in [%.6g, %.6g]: q*=(%.6g, %.6g)",
                qxs.size, search.q_min, search.q_max, q_star.qx, q_star.qy)
    return design_at(q_star, area, geo, rp, grid, alignment,
                     objective_trace=np.column_stack([qxs, costs]))


def search_placement_ula(area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                         search: Optional[SearchRange] = None, H: float = 100.0,
                         grid: Optional[Tuple[int, int]] = None,
                         alignment: Alignment = 'center',
                         workers: Optional[int] = None) -> PlacementResult:
    """Grid search of the ULA objective on the x-axis."""
    if not geo.is_ula:
        raise InvalidInputError(f"ULA search needs Ny = 1, got Ny={geo.ny}")
    search = search or SearchRange.default_for(area, H)
    return _search(area, geo, rp, search, H, 0.0, grid, alignment, workers)


def search_placement_upa(area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                         search: Optional[SearchRange] = None, H: float = 100.0,
                         grid: Optional[Tuple[int, int]] = None,
                         alignment: Alignment = 'center',
                         workers: Optional[int] = None) -> PlacementResult:
    """Grid search on q_x with q_y = -Ny dy / 2."""
    search = search or SearchRange.default_for(area, H)
    return _search(area, geo, rp, search, H, upa_y_offset(geo, rp), grid, alignment, workers)


def sub_array_profile(qxs: Iterable[float], area: TargetArea, geo: ArrayGeometry,
                      rp: RadioParams, H: float) -> List[Tuple[int, float]]:
    """(L_x, worst cascaded path loss) for each q_x on the x-axis."""
    rows = []
    for qx in qxs:
        q = Placement(float(qx), 0.0, H)
        (Lx, _), _ = _sub_array_counts(q, area, geo, rp)
        rows.append((Lx, worst_path_loss(q, area)))
    return rows
