"""
Benchmark schemes and the experiment drivers behind the figure tables
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .beamform import (
    EDGE_GAIN_FACTOR,
    Alignment,
    conjugate_phases,
    flattened_pattern_gain,
    phases_from_plan,
    plan_flatten_1d,
)
from .channel import ArrayGeometry, PhaseProfile, RadioParams, snr, to_db, worst_snr
from .config import GRID
from .exceptions import InvalidInputError
from .geometry import Placement, TargetArea, freq_spans
from .placement import (
    PlacementResult,
    deployment_coefficient,
    design_at,
    optimal_placement_single,
    parallel_map,
    search_placement_ula,
    search_placement_upa,
    sub_array_profile,
    upa_y_offset,
    worst_snr_approx,
)
from .schemas import ExperimentSpec, ScenarioConfig, Scheme, make_experiment

logger = logging.getLogger(__name__)

CSV_OPTIONS = {'index': False, 'float_format': '%.9g', 'lineterminator': '\n'}

SEGMENTS = {'a': (250.0, 750.0), 'b': (500.0, 1500.0), 'c': (155.0, 325.0)}

# spatial-frequency span of the worst-case gain law
GAIN_LAW_SPAN = 0.1


def benchmark_1d_on_upa(q: Placement, area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                        grid: Optional[Tuple[int, int]] = None,
                        alignment: Alignment = 'center') -> Tuple[PhaseProfile, float]:
    """x-axis flatten design repeated on every row (no steering along y)."""
    grid = grid or (GRID['nx_pts'], GRID['ny_pts'])
    (x_lo, x_hi), _ = freq_spans(q, area)
    plan_x = plan_flatten_1d(x_lo, x_hi, geo.nx, rp.wavelength_ratio_x, alignment)
    phases = PhaseProfile.separable(phases_from_plan(plan_x), np.zeros(geo.ny))
    value, point = worst_snr(q, area, phases, geo, rp, grid)
    logger.debug("1-D beamforming on %dx%d array: worst SNR %.3f dB at %s",
                 geo.nx, geo.ny, float(to_db(value)), point)
    return phases, value


def benchmark_center_placement(area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                               H: float, grid: Optional[Tuple[int, int]] = None,
                               alignment: Alignment = 'center') -> PlacementResult:
    q = Placement(area.center_x, upa_y_offset(geo, rp), H)
    return design_at(q, area, geo, rp, grid, alignment)


def active_elements(span: float, n: int, d_bar: float) -> int:
    """Largest aperture whose beam 1/(N' d) still covers the span."""
    if span <= 0:
        return n
    return int(max(1, min(n, math.floor(1.0 / (span * d_bar) + 1e-9))))


def _deactivated_axis(lo: float, hi: float, n: int, d_bar: float):
    n_active = active_elements(hi - lo, n, d_bar)
    start = (n - n_active) // 2
    theta = np.zeros(n)
    mask = np.zeros(n)
    plan = plan_flatten_1d(lo, hi, n_active, d_bar, 'center')
    theta[start:start + n_active] = phases_from_plan(plan)
    mask[start:start + n_active] = 1.0
    return theta, mask, n_active


def benchmark_deactivation(q: Placement, area: TargetArea, geo: ArrayGeometry, rp: RadioParams,
                           grid: Optional[Tuple[int, int]] = None) -> Tuple[PhaseProfile, float]:
    """Centered contiguous active block per axis, the rest switched off."""
    grid = grid or (GRID['nx_pts'], GRID['ny_pts'])
    (x_lo, x_hi), (y_lo, y_hi) = freq_spans(q, area)
    tx, mx, nx_on = _deactivated_axis(x_lo, x_hi, geo.nx, rp.wavelength_ratio_x)
    ty, my, ny_on = _deactivated_axis(y_lo, y_hi, geo.ny, rp.wavelength_ratio_y)
    phases = PhaseProfile.from_grid(np.add.outer(tx, ty), np.outer(mx, my))
    value, _ = worst_snr(q, area, phases, geo, rp, grid)
    logger.debug("deactivation keeps %dx%d of %dx%d elements", nx_on, ny_on, geo.nx, geo.ny)
    return phases, value


def worst_pattern_gain(N: int, span: float, d_bar: float, alignment: Alignment = 'center',
                       points: int = 2001) -> float:
    """Minimum flattened-beam gain over an interval of the given span centered on 0."""
    plan = plan_flatten_1d(-span / 2.0, span / 2.0, N, d_bar, alignment)
    deltas = np.linspace(-span / 2.0, span / 2.0, points)
    return float(np.min(flattened_pattern_gain(plan, N, deltas)))


@dataclass(frozen=True)
class FigurePreset:
    description: str
    schemes: Tuple[Scheme, ...]
    sweep: Callable[[ScenarioConfig], List[float]]
    runner: Callable
    columns: Tuple[str, ...] = ('sweep', 'scheme', 'value_db')
    setup: Dict = field(default_factory=dict)


def _row(sweep, scheme: Scheme, value, series: Optional[str] = None):
    name = scheme.value if series is None else f"{scheme.value}/{series}"
    return sweep, name, float(value)


def _power_rows(spec: ExperimentSpec, designs: Dict[Tuple[Scheme, Optional[str]], float]):
    """SNR is linear in P, so one design per scheme serves the whole power sweep."""
    p0 = spec.scenario.tx_power_dbm
    rows = []
    for p in spec.sweep:
        for (scheme, series), value in designs.items():
            rows.append(_row(p, scheme, float(to_db(value)) + (p - p0), series))
    return rows


def _run_fig4(spec: ExperimentSpec, workers):
    rows = []
    for rho in spec.sweep:
        xis = deployment_coefficient(rho)
        rows.append(_row(rho, Scheme.OPTIMAL_PLACEMENT, xis[0], 'lower'))
        rows.append(_row(rho, Scheme.OPTIMAL_PLACEMENT, xis[-1], 'upper'))
    return rows


FIG5_N, FIG5_SPAN = 512, 0.3125  # partitions into L = 4 sub-arrays of 128


def _run_fig5(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    plan = plan_flatten_1d(-FIG5_SPAN / 2.0, FIG5_SPAN / 2.0, FIG5_N, cfg.dx_bar, 'center')
    gains = flattened_pattern_gain(plan, FIG5_N, np.asarray(spec.sweep, dtype=float))
    return list(zip(spec.sweep, (float(g) for g in to_db(gains))))


def _run_fig6(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    d = cfg.dx_bar

    def one(n):
        n = int(n)
        measured = worst_pattern_gain(n, GAIN_LAW_SPAN, d, cfg.beam_alignment)
        return [
            _row(n, Scheme.FLATTEN_3D, to_db(measured), 'exact'),
            _row(n, Scheme.FLATTEN_3D, to_db(EDGE_GAIN_FACTOR * n ** 2), 'small-n'),
            _row(n, Scheme.FLATTEN_3D, to_db(EDGE_GAIN_FACTOR * n / (GAIN_LAW_SPAN * d)), 'large-n'),
        ]
    return [row for rows in parallel_map(one, spec.sweep, workers) for row in rows]


def _run_fig7(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    rp = cfg.radio_params()
    w1 = (cfg.area_center_x, 0.0)
    q_opt = optimal_placement_single(w1, cfg.H).candidates[0]
    q_mid = Placement(w1[0] / 2.0, 0.0, cfg.H)
    placements = {Scheme.OPTIMAL_PLACEMENT: q_opt, Scheme.MIDPOINT_PLACEMENT: q_mid}
    rows = []
    for n in spec.sweep:
        geo = ArrayGeometry(int(n), 1, cfg.M)
        for scheme in spec.schemes:
            q = placements[scheme]
            value = snr(q, w1, conjugate_phases(q, w1, geo, rp), geo, rp)
            rows.append(_row(int(n), scheme, to_db(value)))
    return rows


def _run_fig8(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    rows = []
    profile = sub_array_profile(spec.sweep, cfg.target_area(), cfg.array_geometry(),
                                cfg.radio_params(), cfg.H)
    for qx, (L, loss) in zip(spec.sweep, profile):
        rows.append(_row(qx, Scheme.OPTIMAL_PLACEMENT, L, 'L'))
        rows.append(_row(qx, Scheme.OPTIMAL_PLACEMENT, loss, 'path-loss'))
    return rows


def _run_fig9(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    area, geo, rp = cfg.target_area(), cfg.array_geometry(), cfg.radio_params()
    values = parallel_map(
        lambda qx: worst_snr_approx(Placement(float(qx), 0.0, cfg.H), area, geo, rp,
                                    cfg.beam_alignment),
        spec.sweep, workers)
    return [_row(qx, Scheme.OPTIMAL_PLACEMENT, to_db(v)) for qx, v in zip(spec.sweep, values)]


def _placement_designs(spec: ExperimentSpec, geo: ArrayGeometry, workers):
    cfg = spec.scenario
    area, rp = cfg.target_area(), cfg.radio_params()
    search = search_placement_ula if geo.is_ula else search_placement_upa
    designs = {}
    if Scheme.OPTIMAL_PLACEMENT in spec.schemes:
        best = search(area, geo, rp, cfg.search_range(area), cfg.H, cfg.grid,
                      cfg.beam_alignment, workers)
        designs[(Scheme.OPTIMAL_PLACEMENT, None)] = best.worst_snr_linear
    if Scheme.CENTER_PLACEMENT in spec.schemes:
        center = benchmark_center_placement(area, geo, rp, cfg.H, cfg.grid, cfg.beam_alignment)
        designs[(Scheme.CENTER_PLACEMENT, None)] = center.worst_snr_linear
    return designs


def _run_fig10(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    return _power_rows(spec, _placement_designs(spec, cfg.array_geometry(cfg.Nx, 1), workers))


def _run_fig11(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    area, rp = cfg.target_area(), cfg.radio_params()
    ny = cfg.Ny
    for n in spec.sweep:
        if int(n) != n or int(n) % ny:
            raise InvalidInputError(f"fig11 sweep value {n} is not a multiple of Ny={ny}")

    def one(n):
        geo = ArrayGeometry(int(n) // ny, ny, cfg.M)
        best = search_placement_upa(area, geo, rp, cfg.search_range(area), cfg.H, cfg.grid,
                                    cfg.beam_alignment)
        rows = []
        if Scheme.FLATTEN_3D in spec.schemes:
            rows.append(_row(int(n), Scheme.FLATTEN_3D, to_db(best.worst_snr_linear)))
        if Scheme.BEAMFORMING_1D in spec.schemes:
            _, value = benchmark_1d_on_upa(best.q_star, area, geo, rp, cfg.grid,
                                           cfg.beam_alignment)
            rows.append(_row(int(n), Scheme.BEAMFORMING_1D, to_db(value)))
        return rows
    return [row for rows in parallel_map(one, spec.sweep, workers) for row in rows]


def _run_fig11b(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    return _power_rows(spec, _placement_designs(spec, cfg.array_geometry(), workers))


FIG12_ARRAYS = {'ula': (400, 1), 'upa': (20, 20)}


def _run_fig12(spec: ExperimentSpec, workers):
    cfg = spec.scenario
    area, rp = cfg.target_area(), cfg.radio_params()
    designs = {}
    for series, (nx, ny) in FIG12_ARRAYS.items():
        geo = ArrayGeometry(nx, ny, cfg.M)
        search = search_placement_ula if geo.is_ula else search_placement_upa
        best = search(area, geo, rp, cfg.search_range(area), cfg.H, cfg.grid,
                      cfg.beam_alignment, workers)
        if Scheme.FLATTEN_3D in spec.schemes:
            designs[(Scheme.FLATTEN_3D, series)] = best.worst_snr_linear
        if Scheme.DEACTIVATION in spec.schemes:
            _, value = benchmark_deactivation(best.q_star, area, geo, rp, cfg.grid)
            designs[(Scheme.DEACTIVATION, series)] = value
    return _power_rows(spec, designs)


def _powers(cfg: ScenarioConfig) -> List[float]:
    return [float(p) for p in range(0, 41, 5)]


def _search_axis(cfg: ScenarioConfig) -> List[float]:
    return [float(v) for v in cfg.search_range().clamped(cfg.target_area()).points()]


def _segment_setup(key: str) -> Dict:
    x_l, x_u = SEGMENTS[key]
    return {'area_center_x': (x_l + x_u) / 2.0, 'area_length': x_u - x_l, 'area_width': 0.0,
            'Nx': 256, 'Ny': 1}


FIGURES: Dict[str, FigurePreset] = {
    'fig4': FigurePreset(
        'deployment coefficient xi*(rho)', (Scheme.OPTIMAL_PLACEMENT,),
        lambda cfg: [round(0.1 * k, 10) for k in range(101)], _run_fig4,
        columns=('sweep', 'scheme', 'value')),
    'fig5': FigurePreset(
        'flattened beam pattern, N=512, L=4', (Scheme.FLATTEN_3D,),
        lambda cfg: [float(v) for v in np.linspace(-0.3, 0.3, 1201)], _run_fig5,
        columns=('delta', 'gain_db')),
    'fig6': FigurePreset(
        'worst-case array gain versus N at span 0.1', (Scheme.FLATTEN_3D,),
        lambda cfg: [10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000], _run_fig6),
    'fig7': FigurePreset(
        'single-location SNR versus N', (Scheme.OPTIMAL_PLACEMENT, Scheme.MIDPOINT_PLACEMENT),
        lambda cfg: list(range(25, 1001, 25)), _run_fig7),
    'fig10': FigurePreset(
        'ULA worst-case SNR versus power', (Scheme.OPTIMAL_PLACEMENT, Scheme.CENTER_PLACEMENT),
        _powers, _run_fig10),
    'fig11': FigurePreset(
        'UPA worst-case SNR versus N (Ny=20)', (Scheme.FLATTEN_3D, Scheme.BEAMFORMING_1D),
        lambda cfg: list(range(200, 2001, 200)), _run_fig11, setup={'Ny': 20}),
    'fig11b': FigurePreset(
        'UPA worst-case SNR versus power (20x20)',
        (Scheme.OPTIMAL_PLACEMENT, Scheme.CENTER_PLACEMENT),
        _powers, _run_fig11b, setup={'Nx': 20, 'Ny': 20}),
    'fig12': FigurePreset(
        'ULA vs UPA with deactivation broadening (N=400)',
        (Scheme.FLATTEN_3D, Scheme.DEACTIVATION), _powers, _run_fig12),
}
for _key in SEGMENTS:
    FIGURES[f'fig8{_key}'] = FigurePreset(
        f'sub-array count and path loss versus q_x, segment {SEGMENTS[_key]}',
        (Scheme.OPTIMAL_PLACEMENT,), _search_axis, _run_fig8,
        columns=('sweep', 'scheme', 'value'), setup=_segment_setup(_key))
    FIGURES[f'fig9{_key}'] = FigurePreset(
        f'approximate worst-case SNR versus q_x, segment {SEGMENTS[_key]}',
        (Scheme.OPTIMAL_PLACEMENT,), _search_axis, _run_fig9, setup=_segment_setup(_key))


def figure_spec(figure_id: str, cfg: Optional[ScenarioConfig] = None,
                sweep: Optional[List[float]] = None, schemes: Optional[List[str]] = None,
                output: Optional[str] = None) -> ExperimentSpec:
    """Experiment for a named figure; sweep and schemes default to the preset."""
    preset = FIGURES.get(figure_id)
    if preset is None:
        raise InvalidInputError(
            f"unknown figure id '{figure_id}'; valid ids: {', '.join(sorted(FIGURES))}")
    cfg = cfg or ScenarioConfig()
    if preset.setup:
        cfg = cfg.updated(**preset.setup)
    return make_experiment(
        figure_id=figure_id,
        scenario=cfg,
        sweep=preset.sweep(cfg) if sweep is None else sweep,
        schemes=list(preset.schemes) if schemes is None else schemes,
        output=output,
    )


def run_experiment(spec: ExperimentSpec, workers: Optional[int] = None) -> pd.DataFrame:
    preset = FIGURES.get(spec.figure_id)
    if preset is None:
        raise InvalidInputError(
            f"unknown figure id '{spec.figure_id}'; valid ids: {', '.join(sorted(FIGURES))}")
    unsupported = [s.value for s in spec.schemes if s not in preset.schemes]
    if unsupported:
        raise InvalidInputError(
            f"scheme(s) {', '.join(unsupported)} not available for {spec.figure_id}; "
            f"choose from {', '.join(s.value for s in preset.schemes)}")
    logger.info("running %s: %s (%d sweep values)", spec.figure_id, preset.description,
                len(spec.sweep))
    rows = preset.runner(spec, workers)
    return pd.DataFrame(rows, columns=list(preset.columns))


def write_table(df: pd.DataFrame, path: Optional[str] = None) -> None:
    """CSV to path, or stdout when path is None."""
    if path:
        df.to_csv(path, encoding='utf-8', **CSV_OPTIONS)
        logger.info("wrote %d rows to %s", len(df), path)
    else:
        sys.stdout.write(df.to_csv(**CSV_OPTIONS))
