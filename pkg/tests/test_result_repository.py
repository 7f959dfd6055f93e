import json

import pytest

from config.settings import Settings
from entities.exceptions import ConfigError
from repositories.result_repository import ResultRepository

ESCHER_ROW = {'lam': 0.5, 'r': 0.5, 'escher_bound': 4.0, 'exact_qfi': 1.0, 'slack': 3.0}
BOUNDS_ROW = {'n': 2, 'lam': 0.1, 'lower': 2.0, 'canonical': 2.0, 'grid_max': 2.0, 'upper': 2.0, 'passed': True}


@pytest.fixture
def results():
    return ResultRepository(Settings())


def test_columns_follow_schema(results):
    assert results.columns('escher') == ['lam', 'r', 'escher_bound', 'exact_qfi', 'slack']
    assert results.columns('measure') == ['n', 'lam', 'r', 'cfi', 'qfi', 'ratio']


def test_csv_formatting(results):
    text = results.to_csv('escher', [dict(ESCHER_ROW, lam=0.1)])
    header, line = text.splitlines()
    assert header == "lam,r,escher_bound,exact_qfi,slack"
    assert line.split(',')[0] == format(0.1, '.17g')
    assert text.endswith("\n")


def test_csv_booleans_and_missing_values(results):
    text = results.to_csv('bounds', [BOUNDS_ROW])
    assert text.splitlines()[1].endswith(",true")
    row = {'n': 2, 'lam': 0.2, 'r': 1e-3, 'cfi': 0.0, 'qfi': 0.0, 'ratio': None}
    assert results.to_csv('measure', [row]).splitlines()[1].endswith(",")


def test_float_digits_come_from_settings():
    text = ResultRepository(Settings(FLOAT_DIGITS=3)).to_csv('escher', [dict(ESCHER_ROW, lam=0.123456)])
    assert text.splitlines()[1].startswith("0.123,")


def test_json_uses_the_csv_float_digits():
    text = ResultRepository(Settings(FLOAT_DIGITS=3)).to_json('escher', [dict(ESCHER_ROW, lam=0.123456)])
    assert json.loads(text)['rows'][0]['lam'] == 0.123


def test_json_floats_round_trip_exactly(results):
    value = 0.1 + 0.2
    rows = [dict(ESCHER_ROW, slack=value)]
    row = json.loads(results.to_json('escher', rows))['rows'][0]
    assert row['slack'] == value
    assert format(row['slack'], '.17g') == results.to_csv('escher', rows).splitlines()[1].split(',')[-1]


def test_fit_orders_columns(results):
    assert results.columns('fit-orders') == [
        'n', 'lam', 'order', 'fitted', 'closed_form', 'rel_error', 'series', 'series_rel_error',
    ]


def test_json_document(results):
    text = results.to_json('escher', [ESCHER_ROW])
    document = json.loads(text)
    assert document['command'] == 'escher'
    assert document['columns'] == results.columns('escher')
    assert document['rows'] == [ESCHER_ROW]
    assert list(document) == sorted(document)
    assert results.load_json('escher', text) == [ESCHER_ROW]


def test_invalid_rows_and_documents(results):
    with pytest.raises(ConfigError):
        results.to_csv('escher', [{'lam': 0.5}])
    with pytest.raises(ConfigError):
        results.to_csv('unknown', [])
    with pytest.raises(ConfigError):
        results.load_json('escher', json.dumps({'rows': [{'lam': 'x'}]}))
    with pytest.raises(ConfigError):
        results.load_json('escher', json.dumps({'table': []}))


def test_write_to_file(results, tmp_path):
    out = tmp_path / "nested" / "escher.csv"
    text = results.write('escher', [ESCHER_ROW], out, 'csv')
    assert out.read_text(encoding='utf-8') == text


def test_write_to_stdout(results, capsys):
    results.write('escher', [ESCHER_ROW], None, 'json')
    assert json.loads(capsys.readouterr().out)['rows'] == [ESCHER_ROW]
