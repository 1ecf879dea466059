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
"""
Run configuration.

A run is configured from, in increasing precedence, built-in defaults,
a TOML config file and command line flags. The config file holds flat
``key = value`` pairs named like the :class:`RunConfig` fields plus an
optional ``[logging]`` table:

.. code-block:: ini

    min_weight = 3
    runs = 100
    epsilon = 0.05
    anchors = "anchors.csv"

    [logging]
    level = "debug"
    handlers = ["stream"]

If a ``<name>-user.toml`` file sits next to ``<name>.toml`` it is deep
merged over it.
"""

import dataclasses
import os
from typing import ClassVar
from typing import Optional
from typing import Tuple

import toml
import ulogger

from polargraph import exceptions
from polargraph import graph
from polargraph import topology


def _deep_merge_dict(a, b):
    """Additively merge right side dict into left side dict."""
    for k, v in b.items():
        if k in a and isinstance(a[k], dict) and isinstance(v, dict):
            _deep_merge_dict(a[k], v)
        else:
            a[k] = v


def _user_path(path):
    stem, ext = os.path.splitext(path)
    return f'{stem}-user{ext or ".toml"}'


def load_config(path):
    """Load ``path`` and deep merge its ``-user`` sibling, if any.

    Returns:
        A flat dict of :class:`RunConfig` field values.
    """
    conf = {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            _deep_merge_dict(conf, toml.load(f))
    except IOError:
        raise exceptions.ConfigError(
            f'Cannot load configuration file "{path}".')
    except toml.TomlDecodeError as e:
        raise exceptions.ConfigError(f'Invalid TOML in "{path}": {e}')

    user_path = _user_path(path)
    if os.path.exists(user_path):
        try:
            with open(user_path, 'r', encoding='utf-8') as f:
                _deep_merge_dict(conf, toml.load(f))
        except toml.TomlDecodeError as e:
            raise exceptions.ConfigError(
                f'Invalid TOML in "{user_path}": {e}')

    logging_conf = conf.pop('logging', {}) or {}
    if 'level' in logging_conf:
        conf['log_level'] = logging_conf['level']
    if 'handlers' in logging_conf:
        conf['log_handlers'] = logging_conf['handlers']
    return conf


@dataclasses.dataclass
class RunConfig:
    """Every parameter of an ``ingest``, ``analyze`` or ``metrics`` run."""
    input: Optional[str] = None
    input_kind: str = 'events'
    min_weight: int = graph.DEFAULT_MIN_WEIGHT
    giant_component: bool = False
    runs: int = 100
    epsilon: float = 0.05
    seed: int = 0
    damping: float = 0.85
    weighted_pagerank: bool = False
    anchors: Optional[str] = None
    apl_mode: str = 'paper-literal'
    weak_ties_include_unassigned: bool = False
    matrix_include_unassigned: bool = False
    top_k: int = 5
    weak_ties_top_k: int = 25
    ego: Tuple[str, ...] = ()
    out: str = 'polargraph-out'
    workers: int = dataclasses.field(
        default_factory=lambda: os.cpu_count() or 1)
    log_level: str = 'INFO'
    log_handlers: Tuple[str, ...] = ('stream',)

    # do not influence results; left out of the run manifest
    EXECUTION_KEYS: ClassVar[Tuple[str, ...]] = (
        'out', 'workers', 'log_level', 'log_handlers')

    @classmethod
    def from_sources(cls, file_config=None, overrides=None):
        """Defaults, then ``file_config``, then ``overrides``."""
        values = {}
        values.update(file_config or {})
        values.update(overrides or {})
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - names)
        if unknown:
            raise exceptions.ConfigError(
                f'Unknown configuration keys: {", ".join(unknown)}')
        for key in ('ego', 'log_handlers'):
            if key in values:
                values[key] = tuple(values[key])
        config = cls(**values)
        config.validate()
        return config

    def _check_type(self, name, types_):
        value = getattr(self, name)
        if isinstance(value, bool) and bool not in types_:
            raise exceptions.ConfigError(f'{name} must not be a boolean')
        if not isinstance(value, types_):
            raise exceptions.ConfigError(
                f'{name} has invalid value {value!r}')

    def validate(self):
        for name in ('min_weight', 'runs', 'seed', 'top_k',
                     'weak_ties_top_k', 'workers'):
            self._check_type(name, (int,))
        for name in ('epsilon', 'damping'):
            self._check_type(name, (int, float))
        for name in ('giant_component', 'weighted_pagerank',
                     'weak_ties_include_unassigned',
                     'matrix_include_unassigned'):
            self._check_type(name, (bool,))

        if self.input_kind not in graph.INPUT_KINDS:
            raise exceptions.ConfigError(
                f'input_kind must be one of {graph.INPUT_KINDS}, '
                f'got "{self.input_kind}"')
        if self.apl_mode not in topology.APL_MODES:
            raise exceptions.ConfigError(
                f'apl_mode must be one of {topology.APL_MODES}, '
                f'got "{self.apl_mode}"')
        if self.min_weight < 1:
            raise exceptions.ConfigError('min_weight must be >= 1')
        if self.runs < 1:
            raise exceptions.ConfigError('runs must be >= 1')
        if not 0 <= self.epsilon < 1:
            raise exceptions.ConfigError('epsilon must be in [0, 1)')
        if self.seed < 0:
            raise exceptions.ConfigError('seed must be >= 0')
        if not 0 < self.damping < 1:
            raise exceptions.ConfigError('damping must be in (0, 1)')
        if self.top_k < 0 or self.weak_ties_top_k < 0:
            raise exceptions.ConfigError('top-k values must be >= 0')
        if self.workers < 1:
            raise exceptions.ConfigError('workers must be >= 1')

    def manifest_dict(self):
        """Effective parameters, without execution-only keys."""
        result = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if field.name in self.EXECUTION_KEYS or value is None:
                continue
            result[field.name] = list(value) if isinstance(
                value, tuple) else value
        return result


def setup_logging(config):
    """Configure logging for a command line run."""
    ulogger.setup_logging(
        progname='polargraph', level=config.log_level.upper(),
        handlers=list(config.log_handlers) or ['stream'])
