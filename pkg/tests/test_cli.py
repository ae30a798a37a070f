import math
from pathlib import Path

import numpy as np
import pytest

from vtflow.cli import main
from vtflow.csv_output import CSV_VERSION_LINE
from vtflow.csv_output import read_csv
from vtflow.csv_output import read_frames
from vtflow.run_pipeline import build_probe
from vtflow.scenario import load_scenario

RUN_FILES = ('certification.csv', 'cutoff.csv', 'reduced.csv', 'frames.csv', 'constants.csv', 'verification.csv',
             'summary.txt')


def test_constant_map_run(scenario_path, tmp_path):
    out = tmp_path / 'constant_map'

    assert main(['run', scenario_path('constant_map.cfg'), '--out', str(out), '--quiet']) == 0

    for name in RUN_FILES:
        assert (out / name).is_file()
        if name.endswith('.csv'):
            assert (out / name).read_text().splitlines()[0] == CSV_VERSION_LINE
    frames = read_frames(str(out / 'frames.csv'))
    assert len(frames) == 11
    for row in frames:
        assert row['status'] == 'ok'
        assert row['sup_e'] == 0.0
        assert row['sup_grad'] == 0.0
        assert row['total_energy'] == 0.0
    rows = read_csv(str(out / 'verification.csv'))
    assert {row['mode'] for row in rows} == {'89', '963', 'liouville', 'closed'}
    assert all(row['verdict'] == 'pass' for row in rows if row['step'])
    assert 'status: ok' in (out / 'summary.txt').read_text()


def test_run_is_deterministic(scenario_path, tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    for out in (first, second):
        assert main(['run', scenario_path('constant_map.cfg'), '--out', str(out), '--quiet', '--seed', '3']) == 0

    for name in RUN_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_infeasible_sphere_stops_at_certification(scenario_path, tmp_path, capsys):
    out = tmp_path / 'infeasible'

    assert main(['run', scenario_path('sphere_infeasible.cfg'), '--out', str(out), '--quiet']) == 5

    assert 'CertificationError' in capsys.readouterr().err
    assert not (out / 'frames.csv').exists()
    summary = (out / 'summary.txt').read_text()
    assert 'stopped with exit code 5' in summary


def test_certify_subcommand(scenario_path, capsys):
    assert main(['certify', scenario_path('sphere_cert.cfg')]) == 0
    assert main(['certify', scenario_path('sphere_infeasible.cfg'), '--quiet']) == 5
    assert 'Scenario sphere_cert: certify' in capsys.readouterr().out


def test_unknown_key_exit_code(write_scenario, capsys):
    path = write_scenario('target.famly = sphere\n')

    assert main(['certify', path]) == 3
    assert 'unknown key' in capsys.readouterr().err


def test_stability_gate_exit_code(write_scenario):
    path = write_scenario('domain.counts = 32, 32\nflow.dt = 0.05\n')
    assert main(['flow', path, '--quiet']) == 4


def test_missing_scenario_file(tmp_path, capsys):
    assert main(['certify', str(tmp_path / 'absent.cfg')]) == 2
    assert 'absent.cfg' in capsys.readouterr().err


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])


def test_verify_subcommand(scenario_path, tmp_path):
    out = tmp_path / 'flow'
    assert main(['flow', scenario_path('constant_map.cfg'), '--out', str(out), '--quiet']) == 0

    frames = str(out / 'frames.csv')
    assert main(['verify', scenario_path('constant_map.cfg'), frames, '--out', str(out), '--quiet']) == 0
    assert (out / 'verification.csv').is_file()


def test_verify_rejects_growing_frames(scenario_path, tmp_path):
    out = tmp_path / 'flow'
    assert main(['flow', scenario_path('constant_map.cfg'), '--out', str(out), '--quiet']) == 0

    path = out / 'frames.csv'
    lines = path.read_text().splitlines()
    header = lines[1].split(',')
    column = header.index('sup_grad')
    last = lines[-1].split(',')
    last[column] = '1000.0'
    lines[-1] = ','.join(last)
    path.write_text('\n'.join(lines) + '\n')

    assert main(['verify', scenario_path('constant_map.cfg'), str(path), '--out', str(out), '--quiet']) == 7


def test_heat_oracle_pipeline(scenario_path, tmp_path):
    out = tmp_path / 'heat_oracle'

    assert main(['run', scenario_path('heat_oracle.cfg'), '--out', str(out), '--quiet']) == 0

    frames = read_frames(str(out / 'frames.csv'))
    assert frames[-1]['time'] == pytest.approx(0.5)
    errors = [row['oracle_error'] for row in frames if not math.isnan(row['oracle_error'])]
    assert errors
    assert max(errors) <= 1e-3
    assert frames[-1]['sup_grad'] == pytest.approx(math.exp(-0.5), rel=1e-2)


def conformal_backward(scenario_path, rate):
    text = Path(scenario_path('backward_flat.cfg')).read_text(encoding='utf-8')
    return text.replace('domain.family = flat_torus', f'domain.family = conformal_torus\ndomain.rate = {rate}')


def test_flow_subcommand_checks_the_domain(scenario_path, write_scenario, tmp_path, capsys):
    path = write_scenario(conformal_backward(scenario_path, -1), name='expanding.cfg')
    out = tmp_path / 'expanding'

    assert main(['flow', path, '--out', str(out), '--quiet']) == 5
    assert 'backward super Ricci flow' in capsys.readouterr().err
    assert not (out / 'frames.csv').exists()


def test_backward_ball_mask_uses_the_data_time(scenario_path, write_scenario):
    scenario = load_scenario(write_scenario(conformal_backward(scenario_path, 0.5)))
    assert scenario.flow.initial_time == 1.0

    probe = build_probe(scenario, None)
    chart = scenario.domain
    np.testing.assert_array_equal(probe.ball_mask, chart.distance_field(1.0) <= 1.0)
    assert probe.ball_mask.sum() > (chart.distance_field(0.0) <= 1.0).sum()
