"""
Command-line entry point for the AIRS relay planner
"""

import argparse
import logging
import logging.config
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from .beamform import conjugate_phases, flattened_pattern_gain, plan_flatten_1d
from .bench import FIGURES, figure_spec, run_experiment, write_table
from .channel import snr, to_db
from .config import load_settings, logging_config
from .exceptions import InvalidInputError
from .placement import (
    PlacementResult,
    optimal_placement_single,
    search_placement_ula,
    search_placement_upa,
)
from .schemas import ScenarioConfig, parse_assignments, parse_config, validate_scenario

logger = logging.getLogger('airs_relay.main')

EXIT_OK, EXIT_FAILURE, EXIT_INVALID = 0, 1, 2


def _point(text: str):
    try:
        x, y = (float(v) for v in text.replace('−', '-').split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return x, y


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='airs-relay',
        description='Placement and passive beam design for an aerial reflecting surface relay')
    parser.add_argument('--config', help='scenario file with key = value lines')
    parser.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                        help='override one scenario key (repeatable)')
    parser.add_argument('--out', help='write CSV here instead of stdout')
    parser.add_argument('--threads', type=int, help='worker threads (0 = all cores)')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    sub = parser.add_subparsers(dest='command', required=True)

    single = sub.add_parser('single-loc', help='closed-form placement for one target location')
    single.add_argument('--w1', type=_point, required=True, help='target location X,Y in meters')
    single.add_argument('--N', type=int, help='number of elements (default Nx*Ny)')

    for name, help_text in (('flatten-1d', 'sub-array partition of a flattened beam'),
                            ('pattern-dump', 'gain of a flattened beam versus offset')):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--delta-min', type=float, required=True)
        p.add_argument('--delta-max', type=float, required=True)
        p.add_argument('--N', type=int, help='number of elements (default Nx)')
        p.add_argument('--d-bar', type=float, help='spacing over wavelength (default dx_bar)')
        p.add_argument('--alignment', choices=['min', 'center'],
                       help='coverage anchoring (default beam_alignment)')
        if name == 'pattern-dump':
            p.add_argument('--points', type=int, default=2001)

    sub.add_parser('place-ula', help='optimized placement for a ULA-based AIRS')
    sub.add_parser('place-upa', help='optimized placement for a UPA-based AIRS')

    fig = sub.add_parser('figure', help='reproduce a figure table')
    fig.add_argument('figure_id', help=', '.join(sorted(FIGURES)))
    fig.add_argument('--sweep', help='comma-separated sweep values overriding the preset')
    fig.add_argument('--schemes', help='comma-separated schemes overriding the preset')
    return parser


def load_scenario(config_path: Optional[str], overrides: List[str]) -> ScenarioConfig:
    text = Path(config_path).read_text(encoding='utf-8') if config_path else ''
    values = parse_assignments(text.splitlines(), source=config_path or 'config')
    values.update(parse_assignments(overrides, source='--set'))
    return validate_scenario(values)


def _single_loc(args, cfg: ScenarioConfig, workers) -> pd.DataFrame:
    n = args.N or cfg.Nx * cfg.Ny
    rp = cfg.radio_params()
    geo = cfg.array_geometry(n, 1)
    result = optimal_placement_single(args.w1, cfg.H)
    rows = []
    for k, (xi, q) in enumerate(zip(result.xi, result.candidates), start=1):
        value = snr(q, args.w1, conjugate_phases(q, args.w1, geo, rp), geo, rp)
        rows.append((k, xi, q.qx, q.qy, float(to_db(value))))
    return pd.DataFrame(rows, columns=['candidate', 'xi', 'qx', 'qy', 'snr_db'])


def _plan(args, cfg: ScenarioConfig):
    n = args.N or cfg.Nx
    d_bar = args.d_bar or cfg.dx_bar
    alignment = args.alignment or cfg.beam_alignment
    return plan_flatten_1d(args.delta_min, args.delta_max, n, d_bar, alignment), n


def _flatten_1d(args, cfg: ScenarioConfig, workers) -> pd.DataFrame:
    plan, _ = _plan(args, cfg)
    rows = [(l, size, phi, alpha) for l, (size, phi, alpha)
            in enumerate(zip(plan.sizes, plan.steer_freqs, plan.common_phases), start=1)]
    return pd.DataFrame(rows, columns=['l', 'size', 'steer_freq', 'common_phase'])


def _pattern_dump(args, cfg: ScenarioConfig, workers) -> pd.DataFrame:
    if args.points < 2:
        raise InvalidInputError(f"--points must be >= 2, got {args.points}")
    plan, n = _plan(args, cfg)
    lo, hi = plan.coverage
    margin = 0.5 * (hi - lo)
    deltas = np.linspace(lo - margin, hi + margin, args.points)
    gains = to_db(flattened_pattern_gain(plan, n, deltas))
    return pd.DataFrame({'delta': deltas, 'gain_db': gains})


def _placement_table(result: PlacementResult) -> pd.DataFrame:
    return pd.DataFrame([{
        'qx': result.q_star.qx,
        'qy': result.q_star.qy,
        'worst_snr_db': float(to_db(result.worst_snr_linear)),
        'worst_snr_approx_db': float(to_db(result.worst_snr_approx)),
        'L_x': result.L_used[0],
        'L_y': result.L_used[1],
        'span_x': result.span[0],
        'span_y': result.span[1],
        'objective': result.objective,
    }])


def _place(args, cfg: ScenarioConfig, workers) -> pd.DataFrame:
    area = cfg.target_area()
    geo = cfg.array_geometry()
    if args.command == 'place-ula':
        if not geo.is_ula:
            raise InvalidInputError(f"place-ula needs Ny = 1, got Ny={cfg.Ny}")
        search = search_placement_ula
    else:
        search = search_placement_upa
    result = search(area, geo, cfg.radio_params(), cfg.search_range(area), cfg.H, cfg.grid,
                    cfg.beam_alignment, workers)
    return _placement_table(result)


def _split(text: Optional[str]):
    if text is None:
        return None
    return [part.strip().replace('−', '-') for part in text.split(',') if part.strip()]


def _figure(args, cfg: ScenarioConfig, workers) -> pd.DataFrame:
    sweep = _split(args.sweep)
    spec = figure_spec(args.figure_id, cfg, sweep=sweep, schemes=_split(args.schemes),
                       output=args.out)
    return run_experiment(spec, workers)


COMMANDS = {
    'single-loc': _single_loc,
    'flatten-1d': _flatten_1d,
    'pattern-dump': _pattern_dump,
    'place-ula': _place,
    'place-upa': _place,
    'figure': _figure,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings()
    logging.config.dictConfig(logging_config(args.log_level or settings.log_level,
                                             settings.log_file))
    workers = settings.threads if args.threads is None else (args.threads or settings.threads)
    try:
        cfg = load_scenario(args.config, args.set)
        table = COMMANDS[args.command](args, cfg, workers)
        write_table(table, args.out)
    except InvalidInputError as e:
        logger.error("invalid input: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        logger.error("I/O failure: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        logger.exception("unexpected failure in %s", args.command)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
