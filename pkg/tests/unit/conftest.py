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
Module for reusable pytest fixtures.
"""

import itertools
import os

import numpy as np
import pytest

from polargraph import graph


def digraph(edges, nodes=()):
    """DirectedGraph from ``(source, target[, weight])`` tuples."""
    weights = {}
    for edge in edges:
        source, target = edge[0], edge[1]
        weight = edge[2] if len(edge) == 3 else 1
        weights[(source, target)] = weight
    all_nodes = set(nodes) | {n for pair in weights for n in pair}
    return graph.DirectedGraph(all_nodes, weights)


def undirected(pairs, weight=1):
    """Both directions of every pair, each with ``weight``."""
    edges = []
    for a, b in pairs:
        edges.extend([(a, b, weight), (b, a, weight)])
    return edges


def clique_pairs(members):
    return list(itertools.combinations(members, 2))


def planted_cliques(count, size, bridges_per_clique=1):
    """``count`` cliques of ``size`` nodes joined in a ring of bridges.

    Clique ``i`` has nodes ``c<i>_<j>``; node ``c<i>_00`` links to
    ``c<i+1>_01`` for every bridge round, so each clique touches
    ``2 * bridges_per_clique`` bridge edges.
    """
    groups = [[f'c{i}_{j:02d}' for j in range(size)] for i in range(count)]
    pairs = []
    for members in groups:
        pairs.extend(clique_pairs(members))
    for round_ in range(bridges_per_clique):
        for i in range(count):
            pairs.append(
                (groups[i][round_], groups[(i + 1) % count][round_ + 1]))
    return digraph(undirected(pairs)), groups


def random_digraph(rng, n, p, max_weight=1, isolated=True):
    """Seeded random digraph on ``n00``..``n{n-1}`` nodes."""
    nodes = [f'n{i:02d}' for i in range(n)]
    edges = []
    for a in nodes:
        for b in nodes:
            if a != b and rng.random() < p:
                edges.append((a, b, int(rng.integers(1, max_weight + 1))))
    return digraph(edges, nodes=nodes if isolated else ())


def set_partitions(items):
    """Every partition of ``items`` into non-empty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [[first] + partial[i]] + partial[i + 1:]
        yield [[first]] + partial


@pytest.fixture
def two_triangles():
    pairs = [('a', 'b'), ('b', 'c'), ('a', 'c'),
             ('d', 'e'), ('e', 'f'), ('d', 'f')]
    return digraph(undirected(pairs))


@pytest.fixture
def bridged_triangles():
    pairs = [('a', 'b'), ('b', 'c'), ('a', 'c'),
             ('d', 'e'), ('e', 'f'), ('d', 'f'), ('c', 'd')]
    return digraph(undirected(pairs))


@pytest.fixture
def triangle_pendant():
    """Directed 3-cycle a->b->c->a plus d->a."""
    return digraph([('a', 'b'), ('b', 'c'), ('c', 'a'), ('d', 'a')])


@pytest.fixture
def star():
    """Center ``c`` linked both ways with leaves l1..l4."""
    return digraph(undirected([('c', f'l{i}') for i in range(1, 5)]))


@pytest.fixture
def in_star():
    return digraph([(f'l{i}', 'c') for i in range(1, 7)])


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def write_csv(tmpdir):
    """Write rows to a CSV file under ``tmpdir`` and return its path."""
    def _write(name, rows):
        path = os.path.join(tmpdir.strpath, name)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            f.write('\r\n'.join(','.join(row) for row in rows) + '\r\n')
        return path
    return _write


@pytest.fixture(scope='session')
def config_file():
    here = os.path.dirname(os.path.realpath(__file__))
    filepath = os.path.join(here, 'fixtures/test-polargraph.toml')
    with open(filepath, 'r') as f:
        return f.read()


@pytest.fixture
def loaded_config():
    return {
        'input': 'retweets.csv',
        'input_kind': 'events',
        'anchors': 'anchors.csv',
        'min_weight': 2,
        'runs': 20,
        'epsilon': 0.1,
        'seed': 7,
        'ego': ['a'],
        'log_level': 'debug',
        'log_handlers': ['stream'],
    }
