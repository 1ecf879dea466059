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
Ensemble-stabilized clusters.

Louvain is run ``N`` times with seeds derived from one master seed. In
every run the communities holding anchor nodes (e.g. the official
accounts of a party) are given the anchor's label; a node joins label
``L`` only if it landed in ``L``'s community in at least
``ceil((1 - epsilon) * N)`` runs. Everything else is left unassigned.

Run ``i`` uses ``numpy.random.SeedSequence(master_seed,
spawn_key=(i,))`` so adding runs never reshuffles earlier ones.
"""

import asyncio
import collections
import concurrent.futures
import csv
import dataclasses
import logging
import math
import types
from typing import FrozenSet
from typing import Mapping
from typing import NamedTuple
from typing import Optional
from typing import Tuple

import numpy as np

from polargraph import centrality
from polargraph import community
from polargraph import exceptions


UNASSIGNED = '__unassigned__'
ANCHOR_HEADER = ('label', 'node_id')
CLUSTER_HEADER = ('node_id', 'label', 'stability')


class AnchorSet:
    """Ordered ``label -> anchor node ids`` mapping.

    Args:
        entries (iterable): ``(label, node ids)`` pairs; labels must be
            unique and non-empty.
    """
    def __init__(self, entries=()):
        self._entries = collections.OrderedDict()
        for label, ids in entries:
            if not label or label == UNASSIGNED:
                raise exceptions.InputError(f'invalid anchor label "{label}"')
            if label in self._entries:
                raise exceptions.InputError(
                    f'duplicate anchor label "{label}"')
            self._entries[label] = frozenset(ids)

    def __iter__(self):
        return iter(self._entries.items())

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, label):
        return self._entries[label]

    @property
    def labels(self):
        return tuple(self._entries)

    def missing_from(self, g):
        """``{label: sorted ids}`` of anchors that are not nodes of ``g``."""
        missing = {}
        for label, ids in self._entries.items():
            absent = sorted(a for a in ids if a not in g)
            if absent:
                missing[label] = absent
        return missing


def read_anchors(path):
    """Read a ``label,node_id`` CSV; rows of one label are grouped."""
    grouped = collections.OrderedDict()
    try:
        with open(path, 'r', newline='', encoding='utf-8-sig') as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or tuple(
                    c.strip() for c in header) != ANCHOR_HEADER:
                raise exceptions.ParseError(
                    'header must be "label,node_id"', row=1, path=path)
            for row_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2 or not row[0] or not row[1]:
                    raise exceptions.ParseError(
                        'expected non-empty "label,node_id"',
                        row=row_number, path=path)
                grouped.setdefault(row[0], set()).add(row[1])
    except OSError as e:
        raise exceptions.InputError(
            f'Cannot read anchors file "{path}": {e.strerror}')
    except UnicodeDecodeError as e:
        raise exceptions.InputError(
            f'Anchors file "{path}" is not valid UTF-8: {e.reason}')
    return AnchorSet(grouped.items())


class RunSummary(NamedTuple):
    index: int
    seed: int
    modularity: float
    communities: int
    matched: Tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class ConsensusClustering:
    """Stable labelled clusters plus the nodes left out of all of them.

    ``stability`` maps every node to the fraction of runs in which it
    landed in its most frequent label (0 when never in a labelled
    community). Assignments loaded from a file carry no run parameters.
    """
    clusters: Mapping[str, FrozenSet[str]]
    unassigned: FrozenSet[str]
    stability: Mapping[str, float]
    n_runs: Optional[int] = None
    epsilon: Optional[float] = None
    master_seed: Optional[int] = None
    runs: Tuple[RunSummary, ...] = ()
    first_partition: Optional[community.Partition] = None

    @property
    def labels(self):
        return tuple(self.clusters)

    def labels_by_size(self):
        """Labels ordered by descending cluster size, then label."""
        return sorted(self.clusters,
                      key=lambda label: (-len(self.clusters[label]), label))

    def label_of(self, node):
        for label, members in self.clusters.items():
            if node in members:
                return label
        return None

    @property
    def assigned(self):
        return frozenset().union(*self.clusters.values())

    def rows(self):
        """``(node_id, label, stability)`` sorted by (label, node_id)."""
        rows = [(node, label, self.stability.get(node, 0.0))
                for label, members in self.clusters.items()
                for node in members]
        rows.extend((node, UNASSIGNED, self.stability.get(node, 0.0))
                    for node in self.unassigned)
        return sorted(rows, key=lambda r: (r[1], r[0]))

    @classmethod
    def from_assignment(cls, g, assignment, stability=None):
        """Build from a ``node -> label`` mapping over the nodes of ``g``.

        Nodes of ``g`` missing from ``assignment`` and nodes labelled
        ``__unassigned__`` are unassigned.

        Raises:
            polargraph.exceptions.GraphError: if ``assignment`` names
                nodes that are not in ``g``.
        """
        unknown = sorted(n for n in assignment if n not in g)
        if unknown:
            raise exceptions.GraphError(
                f'unknown node ids: {", ".join(unknown)}')
        clusters = collections.OrderedDict()
        for node in g.nodes:
            label = assignment.get(node, UNASSIGNED)
            if label != UNASSIGNED:
                clusters.setdefault(label, set()).add(node)
        assigned = {n for members in clusters.values() for n in members}
        stability = stability or {}
        return cls(
            clusters=types.MappingProxyType(
                {label: frozenset(clusters[label])
                 for label in sorted(clusters)}),
            unassigned=frozenset(n for n in g.nodes if n not in assigned),
            stability=types.MappingProxyType(
                {n: stability.get(n, 1.0 if n in assigned else 0.0)
                 for n in g.nodes}),
        )


def read_clusters(path, g):
    """Read a ``node_id,label[,stability]`` CSV into a clustering."""
    assignment, stability = {}, {}
    try:
        with open(path, 'r', newline='', encoding='utf-8-sig') as f:
            reader = csv.reader(f)
            header = tuple(c.strip() for c in next(reader, None) or ())
            if header not in (CLUSTER_HEADER, CLUSTER_HEADER[:2]):
                raise exceptions.ParseError(
                    'header must be "node_id,label[,stability]"',
                    row=1, path=path)
            for row_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header) or not row[0] or not row[1]:
                    raise exceptions.ParseError(
                        f'expected {len(header)} non-empty columns',
                        row=row_number, path=path)
                assignment[row[0]] = row[1]
                if len(row) == 3:
                    try:
                        stability[row[0]] = float(row[2])
                    except ValueError:
                        raise exceptions.ParseError(
                            f'stability "{row[2]}" is not a number',
                            row=row_number, path=path)
    except OSError as e:
        raise exceptions.InputError(
            f'Cannot read cluster file "{path}": {e.strerror}')
    except UnicodeDecodeError as e:
        raise exceptions.InputError(
            f'Cluster file "{path}" is not valid UTF-8: {e.reason}')
    try:
        return ConsensusClustering.from_assignment(g, assignment, stability)
    except exceptions.GraphError as e:
        raise exceptions.InputError(f'{path}: {e}')


def derive_seed(master_seed, run_index):
    """64-bit seed of ensemble run ``run_index``."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(run_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def stable_threshold(n_runs, epsilon):
    """Minimum number of runs a node must share with a label."""
    return math.ceil(round((1 - epsilon) * n_runs, 9))


def match_clusters(p, g, anchors, pagerank):
    """Label the communities of ``p`` that hold anchor nodes.

    Each label claims the community of its highest-PageRank anchor
    present in ``g``. When two labels claim one community the claim
    backed by the higher PageRank wins (earlier label on a tie) and the
    other label stays unmatched for this partition.

    Returns:
        ``{label: community id}`` in anchor order.
    """
    claims = {}
    for label, ids in anchors:
        present = [a for a in ids if a in g and a in p]
        if not present:
            continue
        best = min(present, key=lambda a: (-pagerank[a], a))
        target = p[best]
        if target not in claims or pagerank[best] > claims[target][0]:
            claims[target] = (pagerank[best], label)
    matched = {label: target for target, (_, label) in claims.items()}
    return {label: matched[label] for label in anchors.labels
            if label in matched}


#####
# Ensemble execution
#####
_WORKER_NETWORK = None


def _init_worker(network):
    global _WORKER_NETWORK
    _WORKER_NETWORK = network


def _louvain_in_worker(seed):
    partition = community.louvain(_WORKER_NETWORK, seed)
    return dict(partition.assignment)


async def _run_parallel(network, seeds, workers):
    loop = asyncio.get_running_loop()
    with concurrent.futures.ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker,
            initargs=(network,)) as pool:
        tasks = [loop.run_in_executor(pool, _louvain_in_worker, seed)
                 for seed in seeds]
        return await asyncio.gather(*tasks)


def run_ensemble(network, seeds, workers=1):
    """Louvain partitions for ``seeds``, returned in seed order."""
    if workers <= 1 or len(seeds) < 2:
        return [community.louvain(network, seed) for seed in seeds]
    assignments = asyncio.run(_run_parallel(network, seeds, workers))
    return [community.Partition(a) for a in assignments]


def consensus_cluster(g, n_runs=100, epsilon=0.05, anchors=None,
                      master_seed=0, pagerank=None, workers=1):
    """Run the Louvain ensemble and keep the stable labelled clusters.

    Args:
        g (DirectedGraph): Graph with at least one edge.
        n_runs (int): Number of Louvain executions.
        epsilon (float): Allowed fraction of runs a node may spend
            outside its label, in ``[0, 1)``.
        anchors (AnchorSet): Labels and their anchor nodes.
        master_seed (int): Non-negative seed all run seeds derive from.
        pagerank (PageRankVector): Scores on ``g`` used to pick anchors;
            computed with defaults when omitted.
        workers (int): Processes for the ensemble; results do not
            depend on it.
    Returns:
        A :class:`ConsensusClustering`.
    """
    if n_runs < 1:
        raise exceptions.ConfigError(f'runs must be >= 1, got {n_runs}')
    if not 0 <= epsilon < 1:
        raise exceptions.ConfigError(
            f'epsilon must be in [0, 1), got {epsilon}')
    if master_seed < 0:
        raise exceptions.ConfigError(
            f'seed must be >= 0, got {master_seed}')
    anchors = anchors if anchors is not None else AnchorSet()
    for label, absent in anchors.missing_from(g).items():
        logging.warning(
            f'Anchors of "{label}" not in graph, ignored: '
            f'{", ".join(absent)}')

    network = community.WeightedNetwork.from_graph(g)
    if network.total_weight == 0:
        raise exceptions.CommunityError('no edges')
    if pagerank is None:
        pagerank = centrality.pagerank(g)
    seeds = [derive_seed(master_seed, i) for i in range(n_runs)]
    partitions = run_ensemble(network, seeds, workers=workers)

    votes = collections.defaultdict(collections.Counter)
    runs = []
    for index, (seed, partition) in enumerate(zip(seeds, partitions)):
        matched = match_clusters(partition, g, anchors, pagerank)
        for label, target in matched.items():
            for node in partition.communities[target]:
                votes[node][label] += 1
        runs.append(RunSummary(
            index, seed, community.modularity(network, partition),
            partition.number_of_communities, tuple(matched)))

    threshold = stable_threshold(n_runs, epsilon)
    order = {label: i for i, label in enumerate(anchors.labels)}
    clusters = {label: set() for label in anchors.labels}
    unassigned, stability = set(), {}
    for node in g.nodes:
        tally = votes.get(node)
        if not tally:
            stability[node] = 0.0
            unassigned.add(node)
            continue
        label, count = min(tally.items(),
                           key=lambda kv: (-kv[1], order[kv[0]]))
        stability[node] = count / n_runs
        if count >= threshold:
            clusters[label].add(node)
        else:
            unassigned.add(node)

    ever_matched = {label for run in runs for label in run.matched}
    for label in anchors.labels:
        if label not in ever_matched:
            logging.warning(f'Anchor label "{label}" matched no cluster.')

    logging.info(
        f'Consensus over {n_runs} runs (threshold {threshold}): '
        f'{len(g.nodes) - len(unassigned)} of {len(g.nodes)} nodes stable.')
    return ConsensusClustering(
        clusters=types.MappingProxyType(
            {label: frozenset(clusters[label]) for label in anchors.labels}),
        unassigned=frozenset(unassigned),
        stability=types.MappingProxyType(stability),
        n_runs=n_runs,
        epsilon=epsilon,
        master_seed=master_seed,
        runs=tuple(runs),
        first_partition=partitions[0],
    )
