from io import StringIO

import pandas as pd
import pytest

from airs_relay.exceptions import InvalidInputError
from airs_relay.main import load_scenario, main
from airs_relay.schemas import parse_config, serialize_config


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def table(text):
    return pd.read_csv(StringIO(text))


class TestCommands:
    def test_single_loc(self, capsys):
        code, out, _ = run(capsys, ['single-loc', '--w1', '1000,0', '--N', '256'])
        assert code == 0
        df = table(out)
        assert list(df.columns) == ['candidate', 'xi', 'qx', 'qy', 'snr_db']
        assert len(df) == 2
        assert df.qx.tolist() == sorted(df.qx.tolist())
        assert df.snr_db.iloc[0] == pytest.approx(df.snr_db.iloc[1], abs=1e-6)

    def test_single_loc_near_target(self, capsys):
        code, out, _ = run(capsys, ['single-loc', '--w1', '150,0'])
        assert code == 0
        df = table(out)
        assert len(df) == 1
        assert df.xi.iloc[0] == 0.5

    def test_flatten_1d(self, capsys):
        code, out, _ = run(capsys, ['flatten-1d', '--delta-min', '0', '--delta-max', '0.1',
                                    '--N', '256', '--alignment', 'min'])
        assert code == 0
        df = table(out)
        assert list(df.columns) == ['l', 'size', 'steer_freq', 'common_phase']
        assert df['size'].tolist() == [128, 128]

    def test_pattern_dump(self, capsys):
        code, out, _ = run(capsys, ['pattern-dump', '--delta-min', '-0.15625', '--delta-max', '0.15625',
                                    '--N', '512', '--points', '101'])
        assert code == 0
        df = table(out)
        assert list(df.columns) == ['delta', 'gain_db']
        assert len(df) == 101

    def test_place_ula(self, capsys):
        code, out, _ = run(capsys, ['--set', 'area_length=500', '--set', 'area_width=0',
                                    '--set', 'area_center_x=500', '--set', 'grid_nx=41', '--set', 'grid_ny=1',
                                    'place-ula'])
        assert code == 0
        df = table(out)
        assert len(df) == 1
        assert df.qx.iloc[0] <= 500.0
        assert df.L_y.iloc[0] == 1

    def test_place_ula_rejects_upa(self, capsys):
        code, _, err = run(capsys, ['--set', 'Ny=4', 'place-ula'])
        assert code == 2
        assert 'Ny' in err

    def test_figure_to_file(self, capsys, tmp_path):
        target = tmp_path / 'fig4.csv'
        code, out, _ = run(capsys, ['--out', str(target), 'figure', 'fig4', '--sweep', '1,10'])
        assert code == 0
        assert out == ''
        assert target.read_text(encoding='utf-8').splitlines()[0] == 'sweep,scheme,value'

    def test_figure_scheme_override(self, capsys):
        code, out, _ = run(capsys, ['figure', 'fig7', '--sweep', '100', '--schemes', 'midpoint-placement'])
        assert code == 0
        assert set(table(out).scheme) == {'midpoint-placement'}


class TestErrors:
    def test_invalid_override(self, capsys):
        code, _, err = run(capsys, ['--set', 'H=-5', 'single-loc', '--w1', '1000,0'])
        assert code == 2
        assert "'H'" in err

    def test_unknown_figure(self, capsys):
        code, _, err = run(capsys, ['figure', 'fig99'])
        assert code == 2
        assert 'fig4' in err

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ['--config', str(tmp_path / 'nope.cfg'), 'single-loc', '--w1', '1,0'])
        assert code == 2
        assert 'nope.cfg' in err

    def test_inverted_interval(self, capsys):
        code, _, _ = run(capsys, ['flatten-1d', '--delta-min', '0.2', '--delta-max', '0.1'])
        assert code == 2

    def test_bad_point_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(['single-loc', '--w1', 'far away'])
        assert exc.value.code == 2


class TestConfigFile:
    def test_comments_and_unicode_minus(self, tmp_path):
        path = tmp_path / 'scenario.cfg'
        path.write_text("# reference setup\nH = 80  # m\nsearch_q_min = −400\n\nNx = 128\n",
                        encoding='utf-8')
        cfg = load_scenario(str(path), ['Nx=64'])
        assert cfg.H == 80.0
        assert cfg.search_q_min == -400.0
        assert cfg.Nx == 64

    def test_empty_text_gives_defaults(self):
        cfg = parse_config('')
        assert cfg.H == 100.0
        rp = cfg.radio_params()
        assert rp.snr_scale == pytest.approx(1e13, rel=1e-9)

    def test_negative_altitude_names_key(self):
        with pytest.raises(InvalidInputError, match="'H'"):
            parse_config('H = -5')

    @pytest.mark.parametrize("text, message", [
        ('altitude = 5', 'unknown config key'),
        ('H = 5\nH = 6', 'duplicate config key'),
        ('H 5', "expected 'key = value'"),
    ])
    def test_malformed_lines(self, text, message):
        with pytest.raises(InvalidInputError, match=message):
            parse_config(text)

    def test_dotenv_style_lines(self):
        cfg = parse_config('export H="80"\nbeam_alignment=\'min\'  # anchored\nNx = 64 # elements')
        assert (cfg.H, cfg.beam_alignment, cfg.Nx) == (80.0, 'min', 64)

    def test_key_without_value_is_malformed(self):
        with pytest.raises(InvalidInputError, match="line 2"):
            parse_config('H = 5\nNx')

    def test_blank_search_bound_is_unset(self):
        cfg = parse_config('search_q_max = none')
        assert cfg.search_q_max is None
        assert cfg.search_range().q_max == cfg.area_center_x

    def test_serialized_config_parses_back(self):
        cfg = parse_config('H = 120\nNy = 20\nsearch_q_min = -300\nbeam_alignment = min')
        assert parse_config(serialize_config(cfg)) == cfg
