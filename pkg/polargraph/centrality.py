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
PageRank relevance and the inter-cluster ("weak ties") subnetwork.
"""

import dataclasses
import logging
import types
from typing import Mapping

import numpy as np
from scipy import sparse

from polargraph import exceptions
from polargraph import graph as graph_mod


@dataclasses.dataclass(frozen=True)
class PageRankConfig:
    """Power iteration settings.

    Args:
        damping (float): Probability of following an out-edge, in (0, 1).
        tolerance (float): L1 change between iterations that counts as
            converged.
        max_iterations (int): Iteration cap.
        weighted (bool): Split a node's mass proportionally to edge
            weights instead of uniformly over its out-edges.
    """
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 1000
    weighted: bool = False

    def __post_init__(self):
        if not 0 < self.damping < 1:
            raise exceptions.ConfigError(
                f'damping must be in (0, 1), got {self.damping}')
        if self.tolerance <= 0:
            raise exceptions.ConfigError(
                f'tolerance must be positive, got {self.tolerance}')
        if self.max_iterations < 1:
            raise exceptions.ConfigError(
                f'max_iterations must be >= 1, got {self.max_iterations}')


@dataclasses.dataclass(frozen=True)
class PageRankVector:
    scores: Mapping[str, float]
    iterations: int
    converged: bool

    def __getitem__(self, node):
        return self.scores[node]

    def __contains__(self, node):
        return node in self.scores

    def __len__(self):
        return len(self.scores)


def _transition_matrix(g, index, weighted):
    rows, cols, data = [], [], []
    for (source, target), weight in g.edges.items():
        if weighted:
            share = weight / g.out_degree(source, weighted=True)
        else:
            share = 1 / g.out_degree(source)
        rows.append(index[target])
        cols.append(index[source])
        data.append(share)
    n = len(index)
    return sparse.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def pagerank(g, cfg=None):
    """PageRank of every node of ``g`` by power iteration.

    ``PR(i) = c * sum(PR(j) / d_j for j -> i) + (1 - c) / n`` where
    ``d_j`` is the unweighted out-degree. Mass sitting on nodes without
    out-edges is spread uniformly over all nodes every iteration, so the
    scores always sum to 1.

    Args:
        g (DirectedGraph): Non-empty graph.
        cfg (PageRankConfig): Defaults to ``PageRankConfig()``.
    Returns:
        A :class:`PageRankVector`. If the tolerance is not reached the
        last iterate is returned with ``converged=False``.
    """
    cfg = cfg or PageRankConfig()
    n = g.number_of_nodes
    if not n:
        raise exceptions.GraphError('empty graph')

    index = {node: i for i, node in enumerate(g.nodes)}
    transition = _transition_matrix(g, index, cfg.weighted)
    dangling = np.array([g.out_degree(node) == 0 for node in g.nodes])
    c = cfg.damping

    scores = np.full(n, 1.0 / n)
    converged = False
    iteration = 0
    while iteration < cfg.max_iterations:
        iteration += 1
        leaked = scores[dangling].sum()
        updated = c * transition.dot(scores) + (c * leaked + 1 - c) / n
        delta = np.abs(updated - scores).sum()
        scores = updated
        if delta < cfg.tolerance:
            converged = True
            break

    if not converged:
        logging.warning(
            f'PageRank did not converge within {cfg.max_iterations} '
            f'iterations (last L1 change {delta:.3e}).')
    result = dict(zip(g.nodes, scores.tolist()))
    return PageRankVector(types.MappingProxyType(result), iteration, converged)


def rank_nodes(pr, within=None, k=5):
    """Top ``k`` nodes by score, ties broken by ascending node id.

    Scores are taken as they are in ``pr``; restricting with ``within``
    filters, it does not recompute.
    """
    if k < 0:
        raise exceptions.ConfigError(f'k must be >= 0, got {k}')
    if within is None:
        candidates = pr.scores.keys()
    else:
        unknown = sorted(n for n in within if n not in pr)
        if unknown:
            raise exceptions.GraphError(
                f'unknown node ids: {", ".join(unknown)}')
        candidates = within
    ranked = sorted(candidates, key=lambda n: (-pr[n], n))
    return [(node, pr[node]) for node in ranked[:k]]


def weak_ties_subgraph(g, cc, include_unassigned=False):
    """Subgraph of edges joining two different clusters.

    Args:
        g (DirectedGraph): The graph ``cc`` was computed on.
        cc (ConsensusClustering): Cluster assignment.
        include_unassigned (bool): Also keep edges between a clustered
            node and an unassigned one.
    """
    labels = {node: label
              for label, members in cc.clusters.items() for node in members}
    kept = {}
    for (source, target), weight in g.edges.items():
        source_label, target_label = labels.get(source), labels.get(target)
        if source_label == target_label:
            continue
        if source_label is None or target_label is None:
            if not include_unassigned:
                continue
        kept[(source, target)] = weight

    if not kept:
        logging.warning('No edges between different clusters.')
    nodes = {n for pair in kept for n in pair}
    return graph_mod.DirectedGraph(nodes, kept)
