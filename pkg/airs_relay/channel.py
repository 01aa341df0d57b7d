"""Free-space LoS channel gains, array responses and end-to-end SNR.

The source applies maximum-ratio transmission towards the AIRS, which is
optimal regardless of placement, so the source array only shows up as the
factor M in the SNR.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import GEOMETRY, SPEED_OF_LIGHT
from .exceptions import InvalidInputError
from .geometry import Placement, TargetArea, area_grid, tx_offsets

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RadioParams:
    tx_power: float  # W
    noise_power: float  # W
    ref_gain: float  # beta0
    wavelength_ratio_x: float = 0.1  # dx / lambda
    wavelength_ratio_y: float = 0.1  # dy / lambda
    wavelength: float = SPEED_OF_LIGHT / 2.4e9  # m

    def __post_init__(self):
        if self.tx_power < 0:
            raise InvalidInputError(f"tx_power must be >= 0, got {self.tx_power}")
        if not self.noise_power > 0:
            raise InvalidInputError(f"noise_power must be > 0, got {self.noise_power}")
        if not self.ref_gain > 0:
            raise InvalidInputError(f"ref_gain must be > 0, got {self.ref_gain}")
        for name in ('wavelength_ratio_x', 'wavelength_ratio_y'):
            value = getattr(self, name)
            if not 0 < value < 0.5:
                raise InvalidInputError(f"{name} must lie in (0, 0.5), got {value}")
        if not self.wavelength > 0:
            raise InvalidInputError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def snr_scale(self) -> float:
        """P / sigma^2."""
        return self.tx_power / self.noise_power

    @property
    def spacing_y(self) -> float:
        return self.wavelength_ratio_y * self.wavelength


@dataclass(frozen=True)
class ArrayGeometry:
    nx: int
    ny: int = 1
    source_antennas: int = 64  # M

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise InvalidInputError(f"array must have nx, ny >= 1, got {self.nx}x{self.ny}")
        if self.source_antennas < 1:
            raise InvalidInputError(f"source_antennas must be >= 1, got {self.source_antennas}")

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny

    @property
    def is_ula(self) -> bool:
        return self.ny == 1


def wrap_phase(theta) -> np.ndarray:
    wrapped = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can return exactly 2*pi for tiny negative inputs
    wrapped[wrapped >= TWO_PI] = 0.0
    return wrapped


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    """Per-element phase shifts, flat index (nx - 1) * Ny + ny."""
    theta: np.ndarray
    amplitudes: Optional[np.ndarray] = None

    def __post_init__(self):
        theta = wrap_phase(np.atleast_1d(self.theta).ravel())
        object.__setattr__(self, 'theta', theta)
        if self.amplitudes is not None:
            amps = np.asarray(self.amplitudes, dtype=float).ravel()
            if amps.shape != theta.shape:
                raise InvalidInputError(
                    f"amplitudes length {amps.size} does not match {theta.size} phases")
            object.__setattr__(self, 'amplitudes', amps)

    def __len__(self) -> int:
        return self.theta.size

    @classmethod
    def from_grid(cls, theta_grid, amplitude_grid=None) -> 'PhaseProfile':
        """Build from an (Nx, Ny) array of phases."""
        amps = None if amplitude_grid is None else np.asarray(amplitude_grid).ravel()
        return cls(np.asarray(theta_grid, dtype=float).ravel(), amps)

    @classmethod
    def separable(cls, theta_x, theta_y) -> 'PhaseProfile':
        """theta[nx, ny] = theta_x[nx] + theta_y[ny]."""
        return cls.from_grid(np.add.outer(np.asarray(theta_x, float), np.asarray(theta_y, float)))

    def grid(self, geo: ArrayGeometry) -> np.ndarray:
        self._check(geo)
        return self.theta.reshape(geo.nx, geo.ny)

    def weights(self, geo: ArrayGeometry) -> np.ndarray:
        """Complex reflection coefficients as an (Nx, Ny) array."""
        self._check(geo)
        w = np.exp(1j * self.theta)
        if self.amplitudes is not None:
            w = w * self.amplitudes
        return w.reshape(geo.nx, geo.ny)

    def isclose(self, other: 'PhaseProfile', atol: Optional[float] = None,
                ignore_common_phase: bool = False) -> bool:
        """Element-wise equality modulo 2*pi."""
        atol = GEOMETRY['phase_atol'] if atol is None else atol
        if len(self) != len(other):
            return False
        diff = self.theta - other.theta
        if ignore_common_phase:
            diff = diff - diff[0]
        dist = np.abs(np.angle(np.exp(1j * diff)))
        return bool(np.all(dist <= atol))

    def _check(self, geo: ArrayGeometry):
        if self.theta.size != geo.n_elements:
            raise InvalidInputError(
                f"phase profile has {self.theta.size} entries, array has {geo.n_elements}")


def cascaded_path_loss(q: Placement, w) -> float:
    """(H^2 + ||q - w||^2)(H^2 + ||q||^2)."""
    wx, wy = w
    return float((q.H ** 2 + (q.qx - wx) ** 2 + (q.qy - wy) ** 2) * (q.H ** 2 + q.qx ** 2 + q.qy ** 2))


def path_gain_source_airs(q: Placement, rp: RadioParams) -> float:
    return rp.ref_gain / (q.H ** 2 + q.qx ** 2 + q.qy ** 2)


def path_gain_airs_dest(q: Placement, w, rp: RadioParams) -> float:
    wx, wy = w
    return rp.ref_gain / (q.H ** 2 + (q.qx - wx) ** 2 + (q.qy - wy) ** 2)


def array_factor(weights: np.ndarray, d_bar_x: float, d_bar_y: float,
                 dphi, domega) -> np.ndarray:
    """Sum over elements of weight * exp(j 2 pi [(nx-1) dx dphi + (ny-1) dy domega]).

    weights is (Nx, Ny); dphi, domega are equally shaped offset arrays.
    """
    dphi = np.atleast_1d(np.asarray(dphi, dtype=float))
    domega = np.atleast_1d(np.asarray(domega, dtype=float))
    nx, ny = weights.shape
    ex = np.exp(1j * TWO_PI * d_bar_x * np.outer(dphi.ravel(), np.arange(nx)))
    ey = np.exp(1j * TWO_PI * d_bar_y * np.outer(domega.ravel(), np.arange(ny)))
    af = np.einsum('pi,ij,pj->p', ex, weights, ey)
    return af.reshape(dphi.shape)


def array_gain_map(q: Placement, wx, wy, phases: PhaseProfile, geo: ArrayGeometry,
                   rp: RadioParams) -> np.ndarray:
    dphi, domega = tx_offsets(q, wx, wy)
    af = array_factor(phases.weights(geo), rp.wavelength_ratio_x, rp.wavelength_ratio_y,
                      dphi, domega)
    return np.abs(af) ** 2


def array_gain(q: Placement, w, phases: PhaseProfile, geo: ArrayGeometry,
               rp: RadioParams) -> float:
    """Reflected array gain at w, between 0 and N^2 for unit-modulus profiles."""
    wx, wy = w
    return float(array_gain_map(q, [wx], [wy], phases, geo, rp)[0])


def snr_map(q: Placement, wx, wy, phases: PhaseProfile, geo: ArrayGeometry,
            rp: RadioParams) -> np.ndarray:
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    gain = array_gain_map(q, wx, wy, phases, geo, rp)
    loss = (q.H ** 2 + (q.qx - wx) ** 2 + (q.qy - wy) ** 2) * (q.H ** 2 + q.qx ** 2 + q.qy ** 2)
    return rp.snr_scale * rp.ref_gain ** 2 * geo.source_antennas * gain / loss


def snr(q: Placement, w, phases: PhaseProfile, geo: ArrayGeometry, rp: RadioParams) -> float:
    """Linear SNR at w with MRT at the source."""
    wx, wy = w
    return float(snr_map(q, [wx], [wy], phases, geo, rp)[0])


def snr_separable(q: Placement, w, theta_x, theta_y, geo: ArrayGeometry,
                  rp: RadioParams) -> float:
    """SNR for theta[nx, ny] = theta_x[nx] + theta_y[ny] via the product form."""
    theta_x = np.asarray(theta_x, dtype=float)
    theta_y = np.asarray(theta_y, dtype=float)
    if theta_x.size != geo.nx or theta_y.size != geo.ny:
        raise InvalidInputError(
            f"separable phases have {theta_x.size}x{theta_y.size} entries, "
            f"array is {geo.nx}x{geo.ny}")
    wx, wy = w
    dphi, domega = tx_offsets(q, wx, wy)
    gx = np.abs(np.sum(np.exp(1j * (theta_x + TWO_PI * rp.wavelength_ratio_x
                                    * np.arange(geo.nx) * float(dphi))))) ** 2
    gy = np.abs(np.sum(np.exp(1j * (theta_y + TWO_PI * rp.wavelength_ratio_y
                                    * np.arange(geo.ny) * float(domega))))) ** 2
    return float(rp.snr_scale * rp.ref_gain ** 2 * geo.source_antennas * gx * gy
                 / cascaded_path_loss(q, w))


def worst_snr(q: Placement, area: TargetArea, phases: PhaseProfile, geo: ArrayGeometry,
              rp: RadioParams, grid: Tuple[int, int]) -> Tuple[float, Tuple[float, float]]:
    """Exact minimum SNR over the area grid and the point where it occurs."""
    wx, wy = area_grid(area, *grid)
    values = snr_map(q, wx, wy, phases, geo, rp)
    k = int(np.argmin(values))
    return float(values[k]), (float(wx[k]), float(wy[k]))


def to_db(value) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return 10.0 * np.log10(value)
