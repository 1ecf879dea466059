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
Cluster-level results: who interacts with whom, how each cluster is
structured, and who matters inside it.

The interaction matrix is computed on whatever graph is passed in; the
pipeline passes the thresholded graph, so weights below ``min_weight``
never reach it.
"""

import collections
import dataclasses
import logging
from typing import Optional
from typing import Tuple

import numpy as np

from polargraph import centrality
from polargraph import consensus
from polargraph import exceptions
from polargraph import graph as graph_mod
from polargraph import topology


@dataclasses.dataclass(frozen=True)
class InteractionMatrix:
    """Weight sent from row cluster to column cluster.

    ``columns`` equals ``labels`` unless unassigned nodes were included,
    in which case it ends with ``__unassigned__``.
    """
    labels: Tuple[str, ...]
    columns: Tuple[str, ...]
    raw: np.ndarray
    normalized: np.ndarray


def interaction_matrix(g, cc, include_unassigned=False):
    """Row-normalized inter-cluster interaction weights.

    ``raw[i, j]`` is the total weight of edges from nodes of cluster
    ``i`` to nodes of cluster ``j`` (the diagonal included). Each row is
    divided by its own total; rows without outgoing weight stay zero.
    """
    labels = tuple(cc.labels_by_size())
    columns = labels + ((consensus.UNASSIGNED,) if include_unassigned else ())
    position = {node: i for i, label in enumerate(labels)
                for node in cc.clusters[label]}
    if include_unassigned:
        position.update((n, len(labels)) for n in cc.unassigned)

    raw = np.zeros((len(labels), len(columns)), dtype=np.int64)
    for (source, target), weight in g.edges.items():
        row, col = position.get(source), position.get(target)
        if row is None or col is None or row >= len(labels):
            continue
        raw[row, col] += weight

    normalized = np.zeros(raw.shape)
    for i, label in enumerate(labels):
        total = raw[i].sum()
        if total:
            normalized[i] = raw[i] / total
        else:
            logging.warning(
                f'Cluster "{label}" sends no interactions; its row is zero.')
    return InteractionMatrix(labels, columns, raw, normalized)


@dataclasses.dataclass(frozen=True)
class ClusterProfile:
    """Structure of one cluster's intra-network.

    Metrics that are undefined for the cluster (e.g. Gini of an all-zero
    in-degree vector) are ``None``.
    """
    label: str
    nodes: int
    edges: int
    gini_in: Optional[float]
    centralization_in: Optional[float]
    clustering: float
    path_length: Optional[float]
    path_length_reachable: Optional[float]
    k_max: int
    k_avg: Optional[float]
    k_std: Optional[float]
    in_degrees: topology.DegreeDistribution
    lorenz: Optional[topology.LorenzCurve]
    cores: topology.CoreDecomposition


def _or_none(func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except exceptions.TopologyError:
        return None


def profile_cluster(g, label, members):
    """Profile the subgraph of ``g`` induced by ``members``."""
    sub = graph_mod.induced_subgraph(g, members)
    in_degrees = list(sub.in_degrees().values())
    cores = topology.k_core_decomposition(sub)
    clustering, _ = topology.clustering_coefficient(sub)
    return ClusterProfile(
        label=label,
        nodes=sub.number_of_nodes,
        edges=sub.number_of_edges,
        gini_in=_or_none(topology.gini, in_degrees),
        centralization_in=_or_none(topology.in_degree_centralization, sub),
        clustering=clustering,
        path_length=_or_none(
            topology.average_path_length, sub, mode='paper-literal'),
        path_length_reachable=_or_none(
            topology.average_path_length, sub, mode='reachable-only'),
        k_max=cores.k_max,
        k_avg=cores.k_avg,
        k_std=cores.k_std,
        in_degrees=topology.in_degree_distribution(sub),
        lorenz=_or_none(topology.lorenz_points, in_degrees),
        cores=cores,
    )


def cluster_profiles(g, cc):
    """One :class:`ClusterProfile` per labelled cluster, largest first."""
    profiles = []
    for label in cc.labels_by_size():
        members = cc.clusters[label]
        if not members:
            logging.warning(f'Cluster "{label}" is empty; no profile.')
            continue
        profiles.append(profile_cluster(g, label, members))
    return profiles


def top_nodes_report(g, cc, pr, k=5):
    """``{label: [(node, score), ...]}`` with full-graph scores.

    Clusters are ordered by descending size.
    """
    return collections.OrderedDict(
        (label, centrality.rank_nodes(pr, within=cc.clusters[label], k=k))
        for label in cc.labels_by_size())


def cluster_size_distribution(partition):
    """``{community size: number of communities}``, ascending size."""
    counts = collections.Counter(partition.sizes())
    return {size: counts[size] for size in sorted(counts)}


def ego_network(g, center):
    """Subgraph induced by ``center`` and all its in- and out-neighbours."""
    if center not in g:
        raise exceptions.GraphError(f'unknown node ids: {center}')
    members = {center}
    members.update(g.successors(center))
    members.update(g.predecessors(center))
    return graph_mod.induced_subgraph(g, members)
