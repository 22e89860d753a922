import json

import pytest

from frontend.commandline import EXIT_AMBIGUOUS, EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, run


def test_delta_path(capsys):
    assert run(['delta-path', '--shape', '2,3+', '--k', '8']) == EXIT_OK
    assert capsys.readouterr().out == '[5,4]\n'


def test_weights(capsys):
    assert run(['weights', '51', '23']) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [23, 23, 5, 5, 5, 5, 3, 2, 1, 1]


def test_perfect(capsys):
    assert run(['perfect', '--base', 'f1', '--class', '5l-2e', '--cusp', '11', '2']) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['perfect'] is True
    assert payload['double_points'] == 0


def test_box_ascii(capsys):
    assert run(['box', '3', '2']) == EXIT_OK
    assert capsys.readouterr().out == '113\n112\n'


def test_staircase_csv(capsys):
    assert run(['staircase', '--base', 'cp2', '--max-p', '40']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'ratio,p,q,sign,c1,area,bound,bound_exact,bound_decimal'
    assert len(lines) == 5


def test_out_file(tmp_path, capsys):
    target = tmp_path / 'weights.json'
    assert run(['weights', '3', '2', '--out', str(target)]) == EXIT_OK
    assert target.read_text(encoding='utf-8') == '[2,1,1]\n'
    assert json.loads(capsys.readouterr().out) == {'written': str(target)}


def test_output_is_deterministic(capsys):
    run(['check-assumptions', '--shape', '8,13,22', '--c1', '5'])
    first = capsys.readouterr().out
    run(['check-assumptions', '--shape', '8,13,22', '--c1', '5'])
    assert capsys.readouterr().out == first


@pytest.mark.parametrize('argv, code', [
    (['delta-path', '--shape', '2,x', '--k', '3'], EXIT_PARSE),
    (['delta-path', '--shape', '2,3+'], EXIT_PARSE),
    ([], EXIT_PARSE),
    (['weights', '4', '2'], EXIT_DOMAIN),
    (['obstruction', '--shape', '8,13,22', '--c1', '1', '--area', '44'], EXIT_DOMAIN),
    (['orbit', '--shape', '2,3', '--k', '5'], EXIT_AMBIGUOUS),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv) == code
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert set(error) == {'error', 'message'}


def test_obstruction_nonvanishing_flag(capsys):
    argv = ['obstruction', '--shape', '8,13,22', '--c1', '5', '--area', '44']
    assert run(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['nonvanishing_asserted'] is True
    assert run(argv + ['--no-nonvanishing']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['nonvanishing_asserted'] is False


def test_f1_staircase_json_carries_certificates(capsys):
    assert run(['f1-staircase', '--max-p', '11']) == EXIT_OK
    classes = json.loads(capsys.readouterr().out)['classes']
    assert classes
    for row in classes:
        assert row['certificate']['cremona_trace'][-1] == {'d': 0, 'm': [-1]}
        assert 3 * row['d'] - row['m'] == row['p'] + row['q']
        assert row['certificate']['chern'] == 1
