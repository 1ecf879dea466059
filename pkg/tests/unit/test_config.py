# -*- coding: utf-8 -*-
#
# Copyright 2026 The polargraph Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import copy
import os

import pytest

from polargraph import config
from polargraph import exceptions


#####
# Tests for config loading
#####
def test_load_config(tmpdir, config_file, loaded_config):
    """Flat keys load as-is; the logging table maps to log_* keys."""
    conf_file = tmpdir.mkdir('config').join('polargraph.toml')
    conf_file.write(config_file)
    assert loaded_config == config.load_config(conf_file.strpath)


def test_load_config_deep_merges(tmpdir, config_file, loaded_config):
    """Additively merge user file to main config."""
    config_dir = tmpdir.mkdir('mergeconfig')
    main_conf_file = config_dir.join('polargraph.toml')
    main_conf_file.write(config_file)

    user_conf_file = config_dir.join('polargraph-user.toml')
    user_conf_file.write('runs = 5\n[logging]\nlevel = "error"\n')
    conf = config.load_config(main_conf_file.strpath)

    expected_config = copy.deepcopy(loaded_config)
    expected_config['runs'] = 5
    expected_config['log_level'] = 'error'
    assert expected_config == conf


@pytest.mark.parametrize('a,b,expected', [
    ({'a': 1}, {'b': 2}, {'a': 1, 'b': 2}),
    ({'a': 1}, {'a': 2}, {'a': 2}),
    ({'a': {'a1': 1}}, {'a': {'a2': 2}}, {'a': {'a1': 1, 'a2': 2}}),
    ({'a': {'a1': 1}}, {'a': {'a1': 2}}, {'a': {'a1': 2}}),
    ({}, {'a': {'a1': 1}}, {'a': {'a1': 1}}),
    ({'a': None}, {'a': {'a1': 1}}, {'a': {'a1': 1}}),
    ({'a': {'a1': 1}}, {'a': None}, {'a': None}),
    ({'a': {'a1': 1}}, {'a': {}}, {'a': {'a1': 1}})
])
def test_deep_merge_dict(a, b, expected):
    config._deep_merge_dict(a, b)
    assert expected == a


def test_load_config_raises(tmpdir):
    """A missing config file is a configuration error."""
    path = tmpdir.join('missing.toml').strpath
    with pytest.raises(exceptions.ConfigError) as e:
        config.load_config(path)

    assert e.match('Cannot load configuration file')
    assert 2 == e.value.exit_code


@pytest.mark.parametrize('name', ['polargraph.toml', 'polargraph-user.toml'])
def test_load_config_invalid_toml(tmpdir, name):
    config_dir = tmpdir.mkdir('bad')
    config_dir.join('polargraph.toml').write('runs = 5\n')
    config_dir.join(name).write('runs = = 5\n')
    with pytest.raises(exceptions.ConfigError) as e:
        config.load_config(config_dir.join('polargraph.toml').strpath)

    assert e.match('Invalid TOML')


#####
# Tests for RunConfig
#####
def test_run_config_defaults():
    conf = config.RunConfig.from_sources()

    assert 3 == conf.min_weight
    assert 100 == conf.runs
    assert 0.05 == conf.epsilon
    assert 0.85 == conf.damping
    assert 'paper-literal' == conf.apl_mode
    assert not conf.giant_component
    assert not conf.weak_ties_include_unassigned
    assert () == conf.ego
    assert (os.cpu_count() or 1) == conf.workers


def test_run_config_precedence(loaded_config):
    """Flags beat the file, the file beats the defaults."""
    conf = config.RunConfig.from_sources(
        loaded_config, {'runs': 50, 'ego': ('b', 'c')})

    assert 50 == conf.runs
    assert ('b', 'c') == conf.ego
    assert 2 == conf.min_weight
    assert 0.85 == conf.damping
    assert ('stream',) == conf.log_handlers


def test_run_config_unknown_keys():
    with pytest.raises(exceptions.ConfigError) as e:
        config.RunConfig.from_sources({'runz': 3, 'colour': 'red'})

    assert e.match('Unknown configuration keys: colour, runz')


@pytest.mark.parametrize('values', [
    {'min_weight': 0},
    {'runs': 0},
    {'epsilon': 1.0},
    {'epsilon': -0.01},
    {'seed': -5},
    {'damping': 1.0},
    {'top_k': -1},
    {'workers': 0},
    {'input_kind': 'tweets'},
    {'apl_mode': 'harmonic'},
    {'runs': '100'},
    {'runs': True},
    {'giant_component': 'yes'},
])
def test_run_config_invalid(values):
    with pytest.raises(exceptions.ConfigError):
        config.RunConfig.from_sources(values)


def test_manifest_dict_skips_execution_keys():
    conf = config.RunConfig.from_sources(
        {'input': 'in.csv', 'workers': 8, 'out': 'x', 'ego': ['a']})
    manifest = conf.manifest_dict()

    for key in config.RunConfig.EXECUTION_KEYS:
        assert key not in manifest
    assert 'anchors' not in manifest
    assert ['a'] == manifest['ego']
    assert 'in.csv' == manifest['input']


def test_setup_logging(mocker):
    setup = mocker.patch.object(config.ulogger, 'setup_logging')
    conf = config.RunConfig.from_sources({'log_level': 'debug'})
    config.setup_logging(conf)

    setup.assert_called_once_with(
        progname='polargraph', level='DEBUG', handlers=['stream'])
