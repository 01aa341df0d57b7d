"""
Scenario and experiment models, and the flat key = value scenario format
"""

import io
import logging
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from dotenv.parser import parse_stream
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .channel import ArrayGeometry, RadioParams
from .config import GRID, SCENARIO, SEARCH, SPEED_OF_LIGHT
from .exceptions import InvalidInputError
from .geometry import TargetArea
from .placement import SearchRange

logger = logging.getLogger(__name__)


class Scheme(str, Enum):
    OPTIMAL_PLACEMENT = 'optimal-placement'
    MIDPOINT_PLACEMENT = 'midpoint-placement'
    CENTER_PLACEMENT = 'center-placement'
    FLATTEN_3D = '3d-flatten'
    BEAMFORMING_1D = '1d-beamforming'
    DEACTIVATION = 'deactivation-broadening'


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


class ScenarioConfig(BaseModel):
    """Validated scenario; unset keys take the reference-setup defaults."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    H: float = Field(SCENARIO['H'], gt=0)
    tx_power_dbm: float = SCENARIO['tx_power_dbm']
    noise_dbm: float = SCENARIO['noise_dbm']
    beta0_db: float = SCENARIO['beta0_db']
    M: int = Field(SCENARIO['M'], ge=1)
    Nx: int = Field(SCENARIO['Nx'], ge=1)
    Ny: int = Field(SCENARIO['Ny'], ge=1)
    dx_bar: float = Field(SCENARIO['dx_bar'], gt=0, lt=0.5)
    dy_bar: float = Field(SCENARIO['dy_bar'], gt=0, lt=0.5)
    carrier_ghz: float = Field(SCENARIO['carrier_ghz'], gt=0)
    area_center_x: float = SCENARIO['area_center_x']
    area_length: float = Field(SCENARIO['area_length'], ge=0)
    area_width: float = Field(SCENARIO['area_width'], ge=0)
    search_q_min: Optional[float] = None
    search_q_max: Optional[float] = None
    search_step: float = Field(SEARCH['step'], gt=0)
    grid_nx: int = Field(GRID['nx_pts'], ge=1)
    grid_ny: int = Field(GRID['ny_pts'], ge=1)
    beam_alignment: Literal['center', 'min'] = SCENARIO['beam_alignment']

    @field_validator('search_q_min', 'search_q_max', mode='before')
    @classmethod
    def blank_is_unset(cls, v):
        if isinstance(v, str) and v.strip().lower() in ('', 'none'):
            return None
        return v

    def radio_params(self, tx_power_dbm: Optional[float] = None) -> RadioParams:
        power = self.tx_power_dbm if tx_power_dbm is None else tx_power_dbm
        return RadioParams(
            tx_power=dbm_to_watts(power),
            noise_power=dbm_to_watts(self.noise_dbm),
            ref_gain=db_to_linear(self.beta0_db),
            wavelength_ratio_x=self.dx_bar,
            wavelength_ratio_y=self.dy_bar,
            wavelength=SPEED_OF_LIGHT / (self.carrier_ghz * 1e9),
        )

    def array_geometry(self, nx: Optional[int] = None, ny: Optional[int] = None) -> ArrayGeometry:
        return ArrayGeometry(nx or self.Nx, ny or self.Ny, self.M)

    def target_area(self) -> TargetArea:
        return TargetArea(self.area_center_x, self.area_length, self.area_width)

    def search_range(self, area: Optional[TargetArea] = None) -> SearchRange:
        area = area or self.target_area()
        default = SearchRange.default_for(area, self.H)
        q_min = default.q_min if self.search_q_min is None else self.search_q_min
        q_max = default.q_max if self.search_q_max is None else self.search_q_max
        return SearchRange(q_min, q_max, self.search_step)

    @property
    def grid(self) -> Tuple[int, int]:
        return self.grid_nx, self.grid_ny

    def updated(self, **changes) -> 'ScenarioConfig':
        """Validated copy with some keys replaced."""
        return validate_scenario({**self.model_dump(), **changes})


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    figure_id: str
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    sweep: List[float] = Field(..., min_length=1)
    schemes: List[Scheme] = Field(..., min_length=1)
    output: Optional[str] = None


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        key = '.'.join(str(p) for p in err['loc']) or '<config>'
        parts.append(f"'{key}': {err['msg']}")
    return '; '.join(parts)


def validate_scenario(values: Dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(values)
    except ValidationError as e:
        raise InvalidInputError(f"invalid scenario value for {_describe(e)}") from e


def make_experiment(**fields) -> ExperimentSpec:
    try:
        return ExperimentSpec(**fields)
    except ValidationError as e:
        raise InvalidInputError(f"invalid experiment for {_describe(e)}") from e


def parse_assignments(lines, source: str = 'config') -> Dict[str, str]:
    """Tokenize `key = value` lines with the dotenv grammar; '#' starts a comment."""
    values: Dict[str, str] = {}
    for binding in parse_stream(io.StringIO('\n'.join(lines))):
        lineno = binding.original.line
        text = binding.original.string.strip()
        if binding.error or (binding.key is not None and binding.value is None):
            raise InvalidInputError(f"{source} line {lineno}: expected 'key = value', got {text!r}")
        if binding.key is None:
            continue
        if binding.key not in ScenarioConfig.model_fields:
            raise InvalidInputError(f"{source} line {lineno}: unknown config key '{binding.key}'")
        if binding.key in values:
            raise InvalidInputError(f"{source} line {lineno}: duplicate config key '{binding.key}'")
        values[binding.key] = binding.value.replace('−', '-')
    return values


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate flat `key = value` scenario text."""
    return validate_scenario(parse_assignments(text.splitlines()))


def serialize_config(cfg: ScenarioConfig) -> str:
    lines = []
    for key, value in cfg.model_dump(exclude_none=True).items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return '\n'.join(lines) + '\n'
