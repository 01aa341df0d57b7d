"""Passive beam synthesis for the AIRS.

Single-location conjugate phasing, 1-D beam broadening/flattening by
sub-array partitioning, and the separable 3-D design for planar arrays.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from .channel import TWO_PI, ArrayGeometry, PhaseProfile, RadioParams, wrap_phase
from .config import GEOMETRY
from .exceptions import InvalidInputError
from .geometry import Placement, TargetArea, freq_spans, tx_offsets

logger = logging.getLogger(__name__)

Alignment = Literal['min', 'center']
ALIGNMENTS = ('min', 'center')

# (4/pi^2): worst-case gain of one sub-beam at the edge of its coverage, relative to Ns^2
EDGE_GAIN_FACTOR = 4.0 / np.pi ** 2


@dataclass(frozen=True)
class FlattenPlan:
    L: int
    Ns: int
    steer_freqs: Tuple[float, ...]
    common_phases: Tuple[float, ...]
    delta_min: float
    spacing: float  # d_bar along this axis
    n_elements: int
    sizes: Tuple[int, ...]
    coverage_start: float
    delta_max: float
    alignment: str = 'min'

    @property
    def beam_width(self) -> float:
        """Coverage credited to one sub-beam, 1 / (Ns d_bar)."""
        return 1.0 / (self.Ns * self.spacing)

    @property
    def coverage(self) -> Tuple[float, float]:
        return self.coverage_start, self.coverage_start + self.L * self.beam_width

    @property
    def starts(self) -> Tuple[int, ...]:
        return tuple(int(s) for s in np.concatenate(([0], np.cumsum(self.sizes)[:-1])))

    @property
    def worst_gain_approx(self) -> float:
        if self.n_elements == 1:
            return 1.0
        return EDGE_GAIN_FACTOR * self.Ns ** 2


def sub_array_count(span: float, n: int, d_bar: float) -> int:
    """L = ceil(sqrt(span N d_bar)), at least 1 and at most N."""
    if n <= 1 or span <= 0:
        return 1
    L = math.ceil(math.sqrt(span * n * d_bar) - GEOMETRY['ceil_guard'])
    return int(min(max(L, 1), n))


def conjugate_phases(q: Placement, w, geo: ArrayGeometry, rp: RadioParams) -> PhaseProfile:
    """Phases that combine coherently at w (common phase fixed to 0)."""
    wx, wy = w
    dphi, domega = tx_offsets(q, wx, wy)
    theta_x = -TWO_PI * np.arange(geo.nx) * rp.wavelength_ratio_x * float(dphi)
    theta_y = -TWO_PI * np.arange(geo.ny) * rp.wavelength_ratio_y * float(domega)
    return PhaseProfile.separable(theta_x, theta_y)


def single_beam_pattern(Ns: int, d_bar: float, delta):
    """s(delta) = sin(pi Ns d delta) / sin(pi d delta), the sub-array amplitude pattern."""
    if Ns < 1:
        raise InvalidInputError(f"Ns must be >= 1, got {Ns}")
    x = np.pi * d_bar * np.asarray(delta, dtype=float)
    den = np.sin(x)
    near = np.abs(den) < GEOMETRY['sinc_eps']
    safe = np.where(near, 1.0, den)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = np.where(near, Ns * np.cos(Ns * x) / np.cos(x), np.sin(Ns * x) / safe)
    return float(value) if value.ndim == 0 else value


def plan_flatten_1d(delta_min: float, delta_max: float, N: int, d_bar: float,
                    alignment: Alignment = 'min') -> FlattenPlan:
    """Partition N elements into L sub-arrays whose beams tile [delta_min, delta_max].

    With alignment="min" the first sub-beam's coverage starts at delta_min;
    with "center" the whole coverage of L >= 2 sub-beams is centered on the
    interval. A single beam (L = 1) always starts its coverage at delta_min,
    except for a zero span, which yields one beam steered at delta_min.
    """
    if alignment not in ALIGNMENTS:
        raise InvalidInputError(f"alignment must be one of {ALIGNMENTS}, got {alignment!r}")
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    if delta_max < delta_min:
        raise InvalidInputError(f"delta_max {delta_max} is below delta_min {delta_min}")
    if not 0 < d_bar < 0.5:
        raise InvalidInputError(f"d_bar must lie in (0, 0.5), got {d_bar}")

    span = delta_max - delta_min
    L = sub_array_count(span, N, d_bar)
    Ns = N // L
    extra = N - Ns * L
    sizes = tuple(Ns + 1 if l < extra else Ns for l in range(L))
    width = 1.0 / (Ns * d_bar)

    if span == 0:
        alignment = 'center'
    elif L == 1:
        alignment = 'min'
    if alignment == 'min':
        coverage_start = delta_min
    else:
        coverage_start = 0.5 * (delta_min + delta_max) - 0.5 * L * width
    steer = coverage_start + width * (np.arange(L) + 0.5)

    # adjacent sub-beams add in phase at their crossing points
    step = -(TWO_PI * Ns * d_bar * steer[0] + np.pi / Ns)
    alpha = step * np.arange(L)
    # reference each sub-array to its actual first element
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    alpha = alpha - TWO_PI * (starts - np.arange(L) * Ns) * d_bar * steer

    plan = FlattenPlan(
        L=L, Ns=Ns,
        steer_freqs=tuple(float(v) for v in steer),
        common_phases=tuple(float(v) for v in wrap_phase(alpha)),
        delta_min=float(delta_min), spacing=float(d_bar), n_elements=int(N),
        sizes=sizes, coverage_start=float(coverage_start), delta_max=float(delta_max),
        alignment=alignment,
    )
    logger.debug("flatten plan: span=%.6g N=%d -> L=%d Ns=%d (%s)", span, N, L, Ns, alignment)
    return plan


def phases_from_plan(plan: FlattenPlan, N: Optional[int] = None) -> np.ndarray:
    """Element i of sub-array l gets alpha_l - 2 pi i d phi_l."""
    N = plan.n_elements if N is None else N
    if N != plan.n_elements:
        raise InvalidInputError(f"plan was built for {plan.n_elements} elements, got N={N}")
    chunks = [
        alpha - TWO_PI * np.arange(size) * plan.spacing * phi
        for alpha, phi, size in zip(plan.common_phases, plan.steer_freqs, plan.sizes)
    ]
    return wrap_phase(np.concatenate(chunks))


def flattened_pattern_gain(plan: FlattenPlan, N: Optional[int], delta):
    """Exact array gain of phases_from_plan(plan) at spatial-frequency offset delta."""
    N = plan.n_elements if N is None else N
    if N != plan.n_elements:
        raise InvalidInputError(f"plan was built for {plan.n_elements} elements, got N={N}")
    delta = np.asarray(delta, dtype=float)
    d = plan.spacing
    total = np.zeros(delta.shape, dtype=complex)
    for alpha, phi, size, start in zip(plan.common_phases, plan.steer_freqs,
                                       plan.sizes, plan.starts):
        offset = delta - phi
        kernel = single_beam_pattern(size, d, offset)
        phase = alpha + TWO_PI * start * d * delta + np.pi * (size - 1) * d * offset
        total = total + np.exp(1j * phase) * kernel
    gain = np.abs(total) ** 2
    return float(gain) if gain.ndim == 0 else gain


def plan_flatten_3d(q: Placement, area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                    alignment: Alignment = 'center'
                    ) -> Tuple[FlattenPlan, FlattenPlan, PhaseProfile]:
    """Per-axis flatten plans for the area seen from q and their separable profile."""
    (x_lo, x_hi), (y_lo, y_hi) = freq_spans(q, area)
    plan_x = plan_flatten_1d(x_lo, x_hi, geo.nx, rp.wavelength_ratio_x, alignment)
    plan_y = plan_flatten_1d(y_lo, y_hi, geo.ny, rp.wavelength_ratio_y, alignment)
    phases = PhaseProfile.separable(phases_from_plan(plan_x), phases_from_plan(plan_y))
    logger.debug("3-D plan at q=(%.3f, %.3f): L_x=%d L_y=%d",
                 q.qx, q.qy, plan_x.L, plan_y.L)
    return plan_x, plan_y, phases


def worst_gain_approx_3d(plan_x: FlattenPlan, plan_y: FlattenPlan) -> float:
    return plan_x.worst_gain_approx * plan_y.worst_gain_approx
