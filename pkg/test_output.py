#!/usr/bin/env python3
"""Tests for JSON reports and CSV tables."""

import math
import os
import sys
from enum import Enum

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict import __version__
from nonstrict.output import ReportWriter, config_hash, read_csv, read_report
from nonstrict.output.report_writer import format_float

CONFIG = {"command": {"name": "analyze"}, "model": "cold_plasma"}


class Flavor(str, Enum):
    SMOOTH = 'smooth'


def test_report_converts_numpy_and_non_finite(tmp_path):
    writer = ReportWriter(str(tmp_path), CONFIG, seed=3)
    payload = {
        'array': np.array([1.0, 2.5]),
        'count': np.int64(4),
        'flag': np.bool_(True),
        'missing': float('nan'),
        'infinite': math.inf,
        'root': complex(0.0, 2.0),
        'kind': Flavor.SMOOTH,
    }
    path = writer.write_report('report.json', payload, {'extra': 'yes'})
    document = read_report(path)
    result = document['result']
    assert result['array'] == [1.0, 2.5]
    assert result['count'] == 4
    assert result['flag'] is True
    assert result['missing'] is None
    assert result['infinite'] is None
    assert result['root'] == [0.0, 2.0]
    assert result['kind'] == 'smooth'
    assert document['metadata'] == {
        'version': __version__,
        'config_hash': config_hash(CONFIG),
        'seed': 3,
        'extra': 'yes',
    }
    assert writer.written == [path]


def test_csv_round_trip_keeps_full_precision(tmp_path):
    writer = ReportWriter(str(tmp_path), CONFIG)
    rows = [(0.1, 1.0 / 3.0), (math.pi, None)]
    path = writer.write_csv('table.csv', ['x', 'y'], rows, {'note': 'pair'})
    metadata, header, data = read_csv(path)
    assert header == ['x', 'y']
    assert data.shape == (2, 2)
    assert data[0, 0] == 0.1
    assert data[0, 1] == 1.0 / 3.0
    assert data[1, 0] == math.pi
    assert math.isnan(data[1, 1])
    assert metadata['note'] == 'pair'
    assert metadata['seed'] is None
    assert metadata['config_hash'] == config_hash(CONFIG)


def test_empty_csv_has_header_only(tmp_path):
    writer = ReportWriter(str(tmp_path))
    _, header, data = read_csv(writer.write_csv('empty.csv', ['a', 'b', 'c'], []))
    assert header == ['a', 'b', 'c']
    assert data.shape == (0, 3)


def test_identical_inputs_give_identical_bytes(tmp_path):
    first = ReportWriter(str(tmp_path / 'first'), CONFIG, seed=1)
    second = ReportWriter(str(tmp_path / 'second'), dict(reversed(list(CONFIG.items()))), seed=1)
    payload = {'b': [1.5, 2.5], 'a': {'y': 1, 'x': 2}}
    one = first.write_report('r.json', payload)
    two = second.write_report('r.json', dict(reversed(list(payload.items()))))
    assert one.read_bytes() == two.read_bytes()
    csv_one = first.write_csv('t.csv', ['v'], [(0.5,), (0.25,)])
    csv_two = second.write_csv('t.csv', ['v'], [(0.5,), (0.25,)])
    assert csv_one.read_bytes() == csv_two.read_bytes()


def test_config_hash():
    assert config_hash(None) is None
    assert len(config_hash(CONFIG)) == 16
    assert config_hash(CONFIG) == config_hash({"model": "cold_plasma", "command": {"name": "analyze"}})
    assert config_hash(CONFIG) != config_hash({"model": "davidson"})


def test_format_float():
    assert format_float(0.1) == '0.10000000000000001'
    assert format_float(None) == 'nan'
    assert format_float('label') == 'label'
    assert format_float(np.float32(0.5)) == '0.5'
