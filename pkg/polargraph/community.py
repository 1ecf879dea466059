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
Modularity and the two-phase Louvain method.

Everything here works on the undirected view of an interaction graph
with weighted degrees: ``A_ij = w(i->j) + w(j->i)`` and ``m`` is the
total edge weight. Louvain levels are represented by
:class:`WeightedNetwork`, a compressed sparse row adjacency that also
carries the self-loops created when communities are collapsed into
single nodes.

Bookkeeping follows the adjacency-matrix convention: ``sigma_in`` of a
community is ``sum(A_ij)`` over ordered member pairs (every internal
link counted twice, a self-loop of weight ``w`` counted as ``2w``) and
``k_i_in`` is ``sum(A_ij + A_ji)`` over the members ``j`` of the
candidate community.
"""

import logging
import types

import numpy as np
from scipy import sparse

from polargraph import exceptions


# Gains are compared in edge-weight units; real gains between distinct
# integer-weighted configurations are never this small.
_MIN_GAIN = 1e-10
_Q_TOLERANCE = 1e-12


class Partition:
    """Assignment of every node to exactly one community.

    Community ids are relabelled densely from 0 in order of first
    appearance over the sorted node ids, so equal groupings compare
    equal regardless of the ids they were built with.

    Args:
        assignment (dict): ``node -> community key`` (any hashable key).
    """
    def __init__(self, assignment):
        relabel, dense = {}, {}
        for node in sorted(assignment):
            key = assignment[node]
            if key not in relabel:
                relabel[key] = len(relabel)
            dense[node] = relabel[key]

        members = [[] for _ in relabel]
        for node, community in dense.items():
            members[community].append(node)
        self._assignment = types.MappingProxyType(dense)
        self._communities = tuple(frozenset(m) for m in members)

    @classmethod
    def singleton(cls, nodes):
        return cls({n: i for i, n in enumerate(nodes)})

    @classmethod
    def from_communities(cls, communities):
        return cls({n: i for i, group in enumerate(communities)
                    for n in group})

    def __repr__(self):
        return (f'<Partition nodes={len(self._assignment)} '
                f'communities={len(self._communities)}>')

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return dict(self._assignment) == dict(other._assignment)

    def __getitem__(self, node):
        return self._assignment[node]

    def __contains__(self, node):
        return node in self._assignment

    def __len__(self):
        return len(self._assignment)

    @property
    def assignment(self):
        return self._assignment

    @property
    def communities(self):
        """Member sets indexed by community id."""
        return self._communities

    @property
    def number_of_communities(self):
        return len(self._communities)

    def sizes(self):
        return [len(c) for c in self._communities]


class WeightedNetwork:
    """Undirected weighted graph with self-loops.

    The links are held as flat CSR index arrays (``indptr``,
    ``indices``, ``weights``); the links of node index ``i`` sit at
    positions ``indptr[i]:indptr[i + 1]`` sorted by neighbour index.

    Args:
        labels (sequence): Node labels; position is the node index.
        adjacency: Symmetric ``n x n`` scipy sparse matrix of link
            weights with an empty diagonal.
        loops (sequence): Per node index, self-loop weight.
    """
    def __init__(self, labels, adjacency, loops):
        self.labels = tuple(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        adjacency = sparse.csr_matrix(adjacency, copy=True)
        adjacency.eliminate_zeros()
        adjacency.sort_indices()
        self.adjacency = adjacency
        self.indptr = adjacency.indptr.tolist()
        self.indices = adjacency.indices.tolist()
        self.weights = adjacency.data.tolist()
        self.loops = list(loops)
        strengths = np.asarray(adjacency.sum(axis=1)).ravel().tolist()
        self.degrees = [2 * loop + strength
                        for loop, strength in zip(self.loops, strengths)]
        self.total_weight = sum(self.degrees) / 2

    @classmethod
    def from_graph(cls, g):
        index = {n: i for i, n in enumerate(g.nodes)}
        n = len(index)
        rows, cols, data = [], [], []
        for (source, target), weight in g.edges.items():
            rows.append(index[source])
            cols.append(index[target])
            data.append(weight)
        directed = sparse.coo_matrix(
            (np.asarray(data), (rows, cols)), shape=(n, n))
        return cls(g.nodes, directed + directed.T, [0] * n)

    def __repr__(self):
        return (f'<WeightedNetwork nodes={self.number_of_nodes} '
                f'weight={self.total_weight}>')

    @property
    def number_of_nodes(self):
        return len(self.labels)

    def neighbors(self, i):
        """``(indices, weights)`` of the links of node index ``i``."""
        start, stop = self.indptr[i], self.indptr[i + 1]
        return self.indices[start:stop], self.weights[start:stop]

    def weight(self, a, b):
        i, j = self.index[a], self.index[b]
        if i == j:
            return self.loops[i]
        return self.adjacency[i, j].item()

    def edges(self):
        """``(label, label, weight)`` for every link, self-loops included."""
        result = []
        for i, label in enumerate(self.labels):
            if self.loops[i]:
                result.append((label, label, self.loops[i]))
            for j, weight in zip(*self.neighbors(i)):
                if i < j:
                    result.append((label, self.labels[j], weight))
        return result


def _as_network(g):
    if isinstance(g, WeightedNetwork):
        return g
    return WeightedNetwork.from_graph(g)


class LouvainState:
    """Community bookkeeping for one Louvain level.

    Args:
        network (WeightedNetwork): The level being optimized.
        membership (iterable): Community id per node index.
    """
    def __init__(self, network, membership):
        self.network = network
        self.membership = list(membership)
        self.m = network.total_weight
        size = max(self.membership, default=-1) + 1
        self.sigma_in = [0] * size
        self.sigma_tot = [0] * size
        for i, community in enumerate(self.membership):
            self.sigma_tot[community] += network.degrees[i]
            self.sigma_in[community] += 2 * network.loops[i]
            for j, weight in zip(*network.neighbors(i)):
                if self.membership[j] == community:
                    self.sigma_in[community] += weight

    def links_to_communities(self, i):
        """``{community: k_i_in}`` for communities adjacent to node ``i``."""
        links = {}
        membership = self.membership
        for j, weight in zip(*self.network.neighbors(i)):
            community = membership[j]
            links[community] = links.get(community, 0) + 2 * weight
        return links

    def remove(self, i, k_i_in):
        community = self.membership[i]
        self.sigma_tot[community] -= self.network.degrees[i]
        self.sigma_in[community] -= k_i_in + 2 * self.network.loops[i]
        self.membership[i] = -1

    def insert(self, i, community, k_i_in):
        self.sigma_tot[community] += self.network.degrees[i]
        self.sigma_in[community] += k_i_in + 2 * self.network.loops[i]
        self.membership[i] = community

    def modularity(self):
        two_m = 2 * self.m
        return sum(s_in / two_m - (s_tot / two_m) ** 2
                   for s_in, s_tot in zip(self.sigma_in, self.sigma_tot))


def modularity(g, p):
    """Modularity of partition ``p`` on the undirected view of ``g``.

    Args:
        g: A :class:`polargraph.graph.DirectedGraph` or
            :class:`WeightedNetwork`.
        p (Partition): Must cover every node of ``g``.
    Returns:
        Q in ``[-1, 1]``.
    Raises:
        polargraph.exceptions.CommunityError: if ``g`` has no edges or
            ``p`` misses nodes.
    """
    network = _as_network(g)
    if network.total_weight == 0:
        raise exceptions.CommunityError('no edges')
    missing = [n for n in network.labels if n not in p]
    if missing:
        raise exceptions.CommunityError(
            f'partition does not cover {len(missing)} nodes')
    state = LouvainState(network, [p[n] for n in network.labels])
    return state.modularity()


def delta_modularity(state, node, community, k_i_in=None):
    """Modularity change of inserting an isolated node into ``community``.

    ``node`` must not currently be counted in ``community``; either it
    was removed with :meth:`LouvainState.remove` or it sits alone in
    another community.

    Args:
        state (LouvainState): Current bookkeeping.
        node: Node label in ``state.network``.
        community (int): Target community id.
        k_i_in (float): Precomputed link weight into the community; looked
            up when omitted.
    """
    if not 0 <= community < len(state.sigma_tot):
        raise exceptions.CommunityError(f'unknown community {community}')
    i = state.network.index[node]
    if state.membership[i] == community:
        raise exceptions.CommunityError(
            f'node {node} is still counted in community {community}')
    if k_i_in is None:
        k_i_in = state.links_to_communities(i).get(community, 0)

    two_m = 2 * state.m
    k_i = state.network.degrees[i]
    s_in, s_tot = state.sigma_in[community], state.sigma_tot[community]
    after = (s_in + k_i_in) / two_m - ((s_tot + k_i) / two_m) ** 2
    before = s_in / two_m - (s_tot / two_m) ** 2 - (k_i / two_m) ** 2
    return after - before


def _dense_ids(membership):
    ids = {}
    for community in membership:
        if community not in ids:
            ids[community] = len(ids)
    return ids


def _collapse(network, membership, size):
    # membership holds dense ids in [0, size)
    n = network.number_of_nodes
    indicator = sparse.csr_matrix(
        (np.ones(n, dtype=np.int64), (np.arange(n), membership)),
        shape=(n, size))
    summed = (indicator.T @ network.adjacency @ indicator).tocsr()
    # the diagonal counts every internal link in both directions
    internal = summed.diagonal()
    if internal.dtype.kind in 'iu':
        internal = internal // 2
    else:
        internal = internal / 2
    loops = indicator.T @ np.asarray(network.loops, dtype=internal.dtype)
    between = summed - sparse.diags(summed.diagonal())
    return WeightedNetwork(range(size), between, (loops + internal).tolist())


def aggregate(g, p):
    """Collapse every community of ``p`` into a single node.

    The result has one node per community id; its self-loop carries the
    community's total internal weight and inter-community weights are
    summed.
    """
    network = _as_network(g)
    membership = [p[n] for n in network.labels]
    return _collapse(network, membership, p.number_of_communities)


def _move_nodes(state, rng, on_sweep):
    """Local moving phase; returns whether any node changed community.

    The first sweep visits every node in random order. Later sweeps
    only revisit neighbours of moved nodes that ended up outside the
    mover's new community. Once such a sweep moves nothing, a full
    random-order sweep confirms that no node can improve.
    """
    network = state.network
    degrees = network.degrees
    membership = state.membership
    m = state.m
    n = network.number_of_nodes
    quality = state.modularity()
    moved = False
    order, full_sweep = rng.permutation(n).tolist(), True
    while True:
        moves = 0
        pending = [False] * n
        revisit = []
        for i in order:
            k_i = degrees[i]
            own = membership[i]
            links = state.links_to_communities(i)
            state.remove(i, links.get(own, 0))

            sigma_tot = state.sigma_tot
            own_gain = links.get(own, 0) - sigma_tot[own] * k_i / m
            best, best_gain = None, None
            for community, k_i_in in links.items():
                if community == own:
                    continue
                gain = k_i_in - sigma_tot[community] * k_i / m
                if (best is None or gain > best_gain + _MIN_GAIN
                        or (abs(gain - best_gain) <= _MIN_GAIN
                            and community < best)):
                    best, best_gain = community, gain

            if best is not None and best_gain > own_gain + _MIN_GAIN:
                state.insert(i, best, links[best])
                moves += 1
                for j in network.neighbors(i)[0]:
                    if not pending[j] and membership[j] != best:
                        pending[j] = True
                        revisit.append(j)
            else:
                state.insert(i, own, links.get(own, 0))

        updated = state.modularity()
        if updated < quality - _Q_TOLERANCE:
            raise exceptions.CommunityError(
                f'modularity decreased during a sweep ({quality} -> '
                f'{updated})')
        quality = updated
        if on_sweep is not None:
            on_sweep(quality)

        moved = moved or bool(moves)
        if revisit:
            order, full_sweep = revisit, False
        elif full_sweep and not moves:
            return moved
        else:
            order, full_sweep = rng.permutation(n).tolist(), True


def louvain(g, seed, on_sweep=None):
    """Two-phase Louvain modularity optimization.

    Phase one visits nodes in a random order drawn from ``seed`` and
    moves each into the neighbouring community with the largest strictly
    positive modularity gain (ties go to the lowest community id),
    sweeping until a full sweep moves no node. Phase two collapses
    communities into nodes. Phases repeat until a level produces no
    move.

    Args:
        g (DirectedGraph): Graph with at least one edge.
        seed (int): Non-negative seed; equal seeds give equal partitions.
        on_sweep (callable): Optional ``f(q)`` called with the
            modularity after every sweep and every aggregation.
    Returns:
        A :class:`Partition` of the nodes of ``g``.
    """
    network = _as_network(g)
    if network.total_weight == 0:
        raise exceptions.CommunityError('no edges')
    if seed < 0:
        raise exceptions.ConfigError(f'seed must be >= 0, got {seed}')

    rng = np.random.default_rng(seed)
    labels = network.labels
    membership = list(range(network.number_of_nodes))
    level = 0
    while True:
        state = LouvainState(network, range(network.number_of_nodes))
        if not _move_nodes(state, rng, on_sweep):
            break
        quality = state.modularity()
        ids = _dense_ids(state.membership)
        dense = [ids[c] for c in state.membership]
        network = _collapse(network, dense, len(ids))
        membership = [dense[c] for c in membership]
        collapsed = LouvainState(
            network, range(network.number_of_nodes)).modularity()
        if abs(collapsed - quality) > _Q_TOLERANCE:
            raise exceptions.CommunityError(
                f'aggregation changed modularity ({quality} -> {collapsed})')
        if on_sweep is not None:
            on_sweep(collapsed)
        level += 1
        logging.debug(
            f'Louvain level {level}: {network.number_of_nodes} '
            f'communities, Q={quality:.6f}')

    return Partition(dict(zip(labels, membership)))
