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
Structural metrics of a (cluster) network.

Hierarchy is measured by in-degree centralization and the Gini
coefficient of in-degrees, information efficiency by the clustering
coefficient and average path length, and resilience by the k-core
decomposition. All metrics use unweighted degrees; clustering and
k-cores ignore edge direction.

The k-core of a graph is its maximal subgraph in which every node has at
least ``k`` neighbours (``>=``, the usual definition).
"""

import collections
import dataclasses
from typing import Dict
from typing import Optional
from typing import Tuple

import networkx as nx
import numpy as np

from polargraph import exceptions
from polargraph import graph as graph_mod


APL_MODES = ('paper-literal', 'reachable-only')


@dataclasses.dataclass(frozen=True)
class DegreeDistribution:
    """In-degree histogram with fractions and ``P(K >= k)``.

    Only observed degrees are kept; ``cumulative_at`` answers for any
    ``k`` and :meth:`rows` always starts at ``k = 0``.
    """
    histogram: Dict[int, int]
    fractions: Dict[int, float]
    cumulative: Dict[int, float]

    def cumulative_at(self, k):
        total = sum(self.histogram.values())
        if not total:
            return 0.0
        return sum(c for d, c in self.histogram.items() if d >= k) / total

    def rows(self):
        """``(k, count, fraction, P(K >= k))`` rows from ``k = 0`` up.

        An unobserved degree 0 gets a zero-count row, so the table
        always states ``P(K >= 0) = 1``.
        """
        rows = [(k, self.histogram[k], self.fractions[k], self.cumulative[k])
                for k in sorted(self.histogram)]
        if rows and rows[0][0] != 0:
            rows.insert(0, (0, 0, 0.0, 1.0))
        return rows


@dataclasses.dataclass(frozen=True)
class LorenzCurve:
    points: Tuple[Tuple[float, float], ...]

    @property
    def xs(self):
        return [x for x, _ in self.points]

    @property
    def ys(self):
        return [y for _, y in self.points]


@dataclasses.dataclass(frozen=True)
class CoreDecomposition:
    k_index: Dict[str, int]
    k_max: int
    k_avg: Optional[float]
    k_std: Optional[float]

    def distribution(self):
        """``{k: number of nodes with k-index k}`` in ascending ``k``."""
        counts = collections.Counter(self.k_index.values())
        return {k: counts[k] for k in sorted(counts)}

    def core(self, k):
        """Node set of the k-core."""
        return frozenset(n for n, idx in self.k_index.items() if idx >= k)


def in_degree_distribution(g, weighted=False):
    degrees = g.in_degrees(weighted=weighted)
    histogram = collections.Counter(degrees.values())
    n = len(degrees)
    keys = sorted(histogram)
    fractions = {k: histogram[k] / n for k in keys}
    cumulative, remaining = {}, n
    for k in keys:
        cumulative[k] = remaining / n
        remaining -= histogram[k]
    return DegreeDistribution(
        {k: histogram[k] for k in keys}, fractions, cumulative)


def in_degree_centralization(g):
    """Freeman in-degree centralization against the directed in-star.

    ``sum(k_max - k_i) / (n - 1) ** 2`` over unweighted in-degrees.
    """
    n = g.number_of_nodes
    if n < 3:
        raise exceptions.TopologyError('degenerate graph')
    degrees = list(g.in_degrees().values())
    top = max(degrees)
    return sum(top - k for k in degrees) / (n - 1) ** 2


def lorenz_points(values):
    """Empirical Lorenz curve of ascending-sorted ``values``.

    Returns ``n + 1`` points starting at ``(0, 0)`` and ending at
    ``(1, 1)``.
    """
    array = np.sort(np.asarray(values, dtype=float))
    if array.size and array[0] < 0:
        raise exceptions.TopologyError('negative value')
    total = array.sum()
    if not array.size or total <= 0:
        raise exceptions.TopologyError('zero total')
    n = array.size
    ys = np.insert(np.cumsum(array) / total, 0, 0.0)
    ys[-1] = 1.0
    xs = np.arange(n + 1) / n
    return LorenzCurve(tuple(zip(xs.tolist(), ys.tolist())))


def gini(values):
    """Gini coefficient ``1 - 2 * area under the Lorenz curve``.

    The area is integrated with the trapezoid rule over the empirical
    curve, which equals ``sum|x_i - x_j| / (2 n^2 mean)``.
    """
    curve = lorenz_points(values)
    ys = np.asarray(curve.ys)
    n = len(ys) - 1
    return float(1.0 - (ys[1:] + ys[:-1]).sum() / n)


def clustering_coefficient(g):
    """Average local clustering coefficient of the undirected view.

    Nodes with fewer than two neighbours have a local value of 0.

    Returns:
        ``(average, {node: local value})``.
    """
    undirected = graph_mod.undirected_view(g).to_networkx()
    local = nx.clustering(undirected)
    per_node = {n: float(local[n]) for n in g.nodes}
    if not per_node:
        return 0.0, per_node
    return sum(per_node.values()) / len(per_node), per_node


def average_path_length(g, mode='paper-literal'):
    """Mean directed hop distance over ordered node pairs.

    ``paper-literal`` counts unreachable pairs as distance 0 and divides
    by ``n (n - 1)``; ``reachable-only`` divides by the number of
    reachable ordered pairs.
    """
    if mode not in APL_MODES:
        raise exceptions.ConfigError(
            f'apl mode must be one of {APL_MODES}, got "{mode}"')
    n = g.number_of_nodes
    if n < 2:
        raise exceptions.TopologyError('degenerate graph')

    digraph = g.to_networkx()
    total, reachable = 0, 0
    for source in g.nodes:
        lengths = nx.single_source_shortest_path_length(digraph, source)
        for target, length in lengths.items():
            if target != source:
                total += length
                reachable += 1

    if mode == 'paper-literal':
        return total / (n * (n - 1))
    if not reachable:
        raise exceptions.TopologyError('no reachable pairs')
    return total / reachable


def k_core_decomposition(g):
    """k-index of every node, ignoring direction and weights."""
    undirected = graph_mod.undirected_view(g).to_networkx()
    cores = nx.core_number(undirected)
    k_index = {n: int(cores[n]) for n in g.nodes}
    if not k_index:
        return CoreDecomposition(k_index, 0, None, None)
    values = np.fromiter(k_index.values(), dtype=float)
    return CoreDecomposition(
        k_index, int(values.max()), float(values.mean()), float(values.std()))
