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
Interaction graph construction.

Raw interaction logs (one ``source,target`` row per event, or
pre-aggregated ``source,target,weight`` rows) are collapsed into a
weighted directed simple graph. An edge ``a -> b`` means that ``a``
acted on content authored by ``b`` (e.g. ``a`` retweeted ``b``) and its
weight is the number of times that happened.

Node ids are compared exactly; no case folding or other normalization is
applied. Self-interactions are dropped.
"""

import collections
import csv
import logging
import types
from typing import NamedTuple

import networkx as nx
import numpy as np
from zope.interface import implementer

from polargraph import exceptions
from polargraph import interfaces


EVENT_HEADER = ('source', 'target')
EDGE_HEADER = ('source', 'target', 'weight')
INPUT_KINDS = ('events', 'edges')
DEFAULT_MIN_WEIGHT = 3


class WeightedEdge(NamedTuple):
    source: str
    target: str
    weight: int


#####
# Parsing
#####
def _parse_weight(value, row, path):
    try:
        weight = int(value)
    except ValueError:
        raise exceptions.ParseError(
            f'weight "{value}" is not an integer', row=row, path=path)
    if weight <= 0:
        raise exceptions.ParseError(
            f'weight must be positive, got {weight}', row=row, path=path)
    return weight


def _check_header(header, kind, path):
    if header is None:
        raise exceptions.ParseError('missing header row', row=1, path=path)
    header = tuple(col.strip() for col in header)
    if header == EVENT_HEADER:
        found = 'events'
    elif header == EDGE_HEADER:
        found = 'edges'
    else:
        raise exceptions.ParseError(
            'header must be "source,target" or "source,target,weight", '
            f'got "{",".join(header)}"', row=1, path=path)
    if kind is not None and kind != found:
        expected = ','.join(EDGE_HEADER if kind == 'edges' else EVENT_HEADER)
        raise exceptions.ParseError(
            f'input kind "{kind}" expects header "{expected}"',
            row=1, path=path)
    return found == 'edges'


def parse_interaction_log(rows, kind=None, path=None):
    """Aggregate interaction rows into weighted edges.

    Args:
        rows (iterable): CSV rows (sequences of strings), header first.
        kind (str): ``events`` or ``edges`` to require a specific
            header; ``None`` accepts either.
        path (str): Source file, used in error messages only.
    Returns:
        A list of :class:`WeightedEdge`, one per ordered pair, sorted by
        ``(source, target)``. Weights of repeated pairs are summed.
    Raises:
        polargraph.exceptions.ParseError: on a malformed row.
    """
    rows = iter(rows)
    has_weight = _check_header(next(rows, None), kind, path)
    width = len(EDGE_HEADER) if has_weight else len(EVENT_HEADER)

    totals = collections.Counter()
    self_loops = 0
    for row_number, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != width:
            raise exceptions.ParseError(
                f'expected {width} columns, got {len(row)}',
                row=row_number, path=path)
        source, target = row[0], row[1]
        if not source or not target:
            raise exceptions.ParseError(
                'empty node id', row=row_number, path=path)
        weight = 1
        if has_weight:
            weight = _parse_weight(row[2], row_number, path)
        if source == target:
            self_loops += 1
            continue
        totals[(source, target)] += weight

    if self_loops:
        logging.debug(f'Dropped {self_loops} self-interaction rows.')
    return [WeightedEdge(s, t, w) for (s, t), w in sorted(totals.items())]


def read_interaction_log(path, kind=None):
    """Read and aggregate an interaction log CSV file (UTF-8, RFC 4180)."""
    try:
        with open(path, 'r', newline='', encoding='utf-8-sig') as f:
            return parse_interaction_log(csv.reader(f), kind=kind, path=path)
    except OSError as e:
        raise exceptions.InputError(
            f'Cannot read interaction log "{path}": {e.strerror}')
    except UnicodeDecodeError as e:
        raise exceptions.InputError(
            f'Interaction log "{path}" is not valid UTF-8: {e.reason}')


@implementer(interfaces.IInteractionSource)
class CsvInteractionSource:
    """Interaction log stored as a CSV file on disk."""
    def __init__(self, path, kind='events'):
        if kind not in INPUT_KINDS:
            raise exceptions.ConfigError(
                f'input kind must be one of {INPUT_KINDS}, got "{kind}"')
        self.path = path
        self.kind = kind

    def read(self):
        return read_interaction_log(self.path, kind=self.kind)


#####
# Graphs
#####
class DirectedGraph:
    """Weighted directed simple graph, immutable once built.

    Args:
        nodes (iterable): Node ids. Every edge endpoint must be included.
        edges (dict): ``(source, target) -> weight`` with positive
            integer weights and ``source != target``.
    Raises:
        polargraph.exceptions.GraphError: if an edge is invalid.
    """
    def __init__(self, nodes=(), edges=None):
        edges = edges or {}
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(nodes))
        for (source, target), weight in sorted(edges.items()):
            if source == target:
                raise exceptions.GraphError(f'self-loop on "{source}"')
            if weight < 1:
                raise exceptions.GraphError(
                    f'edge {source}->{target} has non-positive weight')
            missing = [n for n in (source, target) if n not in graph]
            if missing:
                raise exceptions.GraphError(
                    f'edge endpoints not in node set: {", ".join(missing)}')
            graph.add_edge(source, target, weight=weight)

        self._graph = nx.freeze(graph)
        self._nodes = tuple(sorted(graph))
        self._edges = types.MappingProxyType(
            {(s, t): d['weight'] for s, t, d in graph.edges(data=True)})
        self._m = sum(self._edges.values())
        self._in = dict(graph.in_degree())
        self._out = dict(graph.out_degree())
        self._w_in = dict(graph.in_degree(weight='weight'))
        self._w_out = dict(graph.out_degree(weight='weight'))

    def __repr__(self):
        return (f'<DirectedGraph nodes={self.number_of_nodes} '
                f'edges={self.number_of_edges} m={self.m}>')

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self._nodes == other._nodes
                and dict(self._edges) == dict(other._edges))

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, node):
        return node in self._graph

    def __iter__(self):
        return iter(self._nodes)

    @property
    def nodes(self):
        """Node ids in ascending order."""
        return self._nodes

    @property
    def edges(self):
        """Read-only ``(source, target) -> weight`` mapping."""
        return self._edges

    @property
    def m(self):
        """Total edge weight."""
        return self._m

    @property
    def number_of_nodes(self):
        return len(self._nodes)

    @property
    def number_of_edges(self):
        return len(self._edges)

    def in_degree(self, node, weighted=False):
        return (self._w_in if weighted else self._in)[node]

    def out_degree(self, node, weighted=False):
        return (self._w_out if weighted else self._out)[node]

    def in_degrees(self, weighted=False):
        """In-degree of every node, in node order."""
        source = self._w_in if weighted else self._in
        return {n: source[n] for n in self._nodes}

    def out_degrees(self, weighted=False):
        source = self._w_out if weighted else self._out
        return {n: source[n] for n in self._nodes}

    def successors(self, node):
        return sorted(self._graph.successors(node))

    def predecessors(self, node):
        return sorted(self._graph.predecessors(node))

    def edge_list(self):
        """Edges as :class:`WeightedEdge`, sorted by (source, target)."""
        return [WeightedEdge(s, t, w) for (s, t), w in self._edges.items()]

    def to_networkx(self):
        """Frozen :class:`networkx.DiGraph` with ``weight`` attributes."""
        return self._graph


def build_graph(edges, min_weight=DEFAULT_MIN_WEIGHT):
    """Threshold weighted edges into a :class:`DirectedGraph`.

    Self-loops are dropped first, repeated pairs are summed, then every
    pair with total weight below ``min_weight`` is removed. Nodes left
    without edges are not part of the result, which may be empty.
    """
    if min_weight < 1:
        raise exceptions.ConfigError(
            f'min_weight must be >= 1, got {min_weight}')

    totals = collections.Counter()
    for source, target, weight in edges:
        if source != target:
            totals[(source, target)] += weight

    kept = {pair: w for pair, w in totals.items() if w >= min_weight}
    nodes = {n for pair in kept for n in pair}
    logging.debug(
        f'Kept {len(kept)} of {len(totals)} edges with weight >= '
        f'{min_weight} ({len(nodes)} nodes).')
    return DirectedGraph(nodes, kept)


def induced_subgraph(g, nodes):
    """Subgraph on ``nodes`` keeping edges with both ends inside.

    Member nodes without surviving edges are kept.

    Raises:
        polargraph.exceptions.GraphError: if any id is not in ``g``.
    """
    nodes = set(nodes)
    unknown = sorted(n for n in nodes if n not in g)
    if unknown:
        raise exceptions.GraphError(f'unknown node ids: {", ".join(unknown)}')
    kept = {(s, t): w for (s, t), w in g.edges.items()
            if s in nodes and t in nodes}
    return DirectedGraph(nodes, kept)


def giant_component(g):
    """Induced subgraph on the largest weakly connected component.

    Equal-sized components are ranked by their smallest node id.
    """
    if not g.number_of_nodes:
        raise exceptions.GraphError('empty graph')
    components = nx.weakly_connected_components(g.to_networkx())
    largest = min(components, key=lambda c: (-len(c), min(c)))
    return induced_subgraph(g, largest)


class UndirectedView:
    """Symmetric view of a :class:`DirectedGraph`.

    ``weight(i, j) == weight(j, i) == w(i->j) + w(j->i)`` and the total
    undirected weight equals the directed graph's ``m``.
    """
    def __init__(self, graph):
        adjacency = {n: {} for n in graph.nodes}
        for (source, target), weight in graph.edges.items():
            adjacency[source][target] = (
                adjacency[source].get(target, 0) + weight)
            adjacency[target][source] = (
                adjacency[target].get(source, 0) + weight)
        self.nodes = graph.nodes
        self.adjacency = adjacency
        self.total_weight = graph.m

    def weight(self, i, j):
        return self.adjacency[i].get(j, 0)

    def neighbors(self, node):
        return sorted(self.adjacency[node])

    def degree(self, node, weighted=True):
        if weighted:
            return sum(self.adjacency[node].values())
        return len(self.adjacency[node])

    def to_matrix(self):
        """Dense symmetric weight matrix in node order."""
        index = {n: i for i, n in enumerate(self.nodes)}
        matrix = np.zeros((len(self.nodes), len(self.nodes)))
        for node, neighbors in self.adjacency.items():
            for other, weight in neighbors.items():
                matrix[index[node], index[other]] = weight
        return matrix

    def to_networkx(self):
        """Unweighted simple :class:`networkx.Graph` with all nodes."""
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(
            (n, o) for n, nbrs in self.adjacency.items() for o in nbrs)
        return graph


def undirected_view(g):
    return UndirectedView(g)
