"""Coordinates, target areas, distances and spatial frequencies.

Conventions: the source sits at the origin, the AIRS hovers at altitude H
above the horizontal point q, target areas are axis-aligned rectangles
centered on the x-axis. Lengths are meters, spatial frequencies are
dimensionless.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from .config import GEOMETRY
from .exceptions import InvalidInputError

logger = logging.getLogger(__name__)

Axis = Literal['x', 'y']


@dataclass(frozen=True)
class Placement:
    qx: float
    qy: float
    H: float

    def __post_init__(self):
        if not self.H > 0:
            raise InvalidInputError(f"H must be > 0, got {self.H}")


@dataclass(frozen=True)
class TargetArea:
    center_x: float
    length: float
    width: float

    def __post_init__(self):
        if self.length < 0 or self.width < 0:
            raise InvalidInputError(
                f"area length/width must be >= 0, got {self.length}, {self.width}")

    @classmethod
    def from_interval(cls, x_l: float, x_u: float) -> 'TargetArea':
        """The 1-D segment [x_l, x_u] on the x-axis."""
        if x_u < x_l:
            raise InvalidInputError(f"segment bounds out of order: [{x_l}, {x_u}]")
        return cls((x_l + x_u) / 2.0, x_u - x_l, 0.0)

    @classmethod
    def point(cls, x: float) -> 'TargetArea':
        return cls(x, 0.0, 0.0)

    @property
    def x_bounds(self) -> Tuple[float, float]:
        return self.center_x - self.length / 2.0, self.center_x + self.length / 2.0

    @property
    def y_bounds(self) -> Tuple[float, float]:
        return -self.width / 2.0, self.width / 2.0

    @property
    def is_point(self) -> bool:
        return self.length == 0 and self.width == 0

    @property
    def is_segment(self) -> bool:
        return self.length > 0 and self.width == 0

    def corners(self) -> np.ndarray:
        """Corner coordinates as a (4, 2) array (repeats collapse for degenerate areas)."""
        (x0, x1), (y0, y1) = self.x_bounds, self.y_bounds
        return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)


@dataclass(frozen=True)
class SpatialFrequencies:
    phi_bar: float
    omega_bar: float


def dist_source_to_airs(q: Placement) -> float:
    return float(np.sqrt(q.H ** 2 + q.qx ** 2 + q.qy ** 2))


def dist_airs_to_point(q: Placement, w) -> float:
    wx, wy = w
    return float(np.sqrt(q.H ** 2 + (wx - q.qx) ** 2 + (wy - q.qy) ** 2))


def rx_spatial_freqs(q: Placement) -> SpatialFrequencies:
    d = dist_source_to_airs(q)
    return SpatialFrequencies(q.qx / d, q.qy / d)


def tx_spatial_freqs(q: Placement, w) -> SpatialFrequencies:
    wx, wy = w
    d = dist_airs_to_point(q, w)
    return SpatialFrequencies((wx - q.qx) / d, (wy - q.qy) / d)


def tx_offsets(q: Placement, wx, wy) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized (Phi_T - Phi_R, Omega_T - Omega_R) for destination arrays wx, wy."""
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    rx = rx_spatial_freqs(q)
    dx = wx - q.qx
    dy = wy - q.qy
    d = np.sqrt(q.H ** 2 + dx ** 2 + dy ** 2)
    return dx / d - rx.phi_bar, dy / d - rx.omega_bar


def boundary_points(area: TargetArea, q: Optional[Placement] = None,
                    samples_per_edge: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Points on which spatial-frequency extrema over the area are evaluated.

    Corners, evenly spaced samples along each edge and, when q is given, the
    projection of q onto each edge. Phi_T is monotone in w_x at fixed w_y (and
    Omega_T in w_y), so extrema sit on the edges, and the only stationary point
    inside an edge is the projection of q.
    """
    n = samples_per_edge or GEOMETRY['samples_per_edge']
    (x0, x1), (y0, y1) = area.x_bounds, area.y_bounds
    if area.is_point:
        return np.array([x0]), np.array([0.0])

    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    px = [x0, x1]
    py = [y0, y1]
    edge_x = [xs, xs, np.full(n, x0), np.full(n, x1)]
    edge_y = [np.full(n, y0), np.full(n, y1), ys, ys]
    if q is not None:
        cx = min(max(q.qx, x0), x1)
        cy = min(max(q.qy, y0), y1)
        edge_x.append(np.array([cx, cx, x0, x1]))
        edge_y.append(np.array([y0, y1, cy, cy]))
    edge_x.append(np.array([px[0], px[1], px[1], px[0]]))
    edge_y.append(np.array([py[0], py[0], py[1], py[1]]))
    return np.concatenate(edge_x), np.concatenate(edge_y)


def freq_spans(q: Placement, area: TargetArea) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """(delta_min, delta_max) along x and along y from one boundary evaluation."""
    wx, wy = boundary_points(area, q)
    dphi, domega = tx_offsets(q, wx, wy)
    return ((float(dphi.min()), float(dphi.max())),
            (float(domega.min()), float(domega.max())))


def freq_span(q: Placement, area: TargetArea, axis: Axis = 'x') -> Tuple[float, float]:
    if axis not in ('x', 'y'):
        raise InvalidInputError(f"axis must be 'x' or 'y', got {axis!r}")
    span_x, span_y = freq_spans(q, area)
    return span_x if axis == 'x' else span_y


def max_dist_to_area(q: Placement, area: TargetArea) -> float:
    """Largest horizontal distance from q to the area (always at a corner)."""
    c = area.corners()
    return float(np.max(np.hypot(c[:, 0] - q.qx, c[:, 1] - q.qy)))


def area_grid(area: TargetArea, nx_pts: int, ny_pts: int) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened evaluation grid over the area, edges included."""
    if nx_pts < 1 or ny_pts < 1:
        raise InvalidInputError(f"grid sizes must be >= 1, got {nx_pts}x{ny_pts}")
    (x0, x1), (y0, y1) = area.x_bounds, area.y_bounds
    xs = np.linspace(x0, x1, nx_pts) if area.length > 0 else np.array([area.center_x])
    ys = np.linspace(y0, y1, ny_pts) if area.width > 0 else np.array([0.0])
    gx, gy = np.meshgrid(xs, ys, indexing='ij')
    return gx.ravel(), gy.ravel()
