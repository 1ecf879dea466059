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

import logging

import pytest

from polargraph import centrality
from polargraph import community
from polargraph import consensus
from polargraph import exceptions
from tests.unit import conftest


def _pagerank(scores):
    return centrality.PageRankVector(scores, 1, True)


@pytest.fixture
def planted():
    g, groups = conftest.planted_cliques(4, 25)
    anchors = consensus.AnchorSet(
        (f'party{i}', {members[10]}) for i, members in enumerate(groups))
    return g, groups, anchors


@pytest.fixture
def small_planted():
    g, groups = conftest.planted_cliques(3, 6)
    anchors = consensus.AnchorSet(
        (f'p{i}', {members[3]}) for i, members in enumerate(groups))
    return g, groups, anchors


#####
# Seeds and thresholds
#####
def test_derive_seed_stable():
    """Seeds depend only on the master seed and the run index."""
    first = [consensus.derive_seed(0, i) for i in range(5)]
    more = [consensus.derive_seed(0, i) for i in range(10)]

    assert first == more[:5]
    assert len(set(more)) == 10
    assert first != [consensus.derive_seed(1, i) for i in range(5)]
    assert all(0 <= s < 2 ** 64 for s in more)


@pytest.mark.parametrize('n_runs,epsilon,expected', [
    (100, 0.05, 95),
    (1, 0.0, 1),
    (10, 0.1, 9),
    (3, 0.5, 2),
    (20, 0.0, 20),
])
def test_stable_threshold(n_runs, epsilon, expected):
    assert expected == consensus.stable_threshold(n_runs, epsilon)


#####
# Anchors
#####
def test_read_anchors(write_csv):
    path = write_csv('anchors.csv', [
        ('label', 'node_id'), ('red', 'r1'), ('blue', 'b1'), ('red', 'r2')])
    anchors = consensus.read_anchors(path)

    assert ('red', 'blue') == anchors.labels
    assert frozenset({'r1', 'r2'}) == anchors['red']


@pytest.mark.parametrize('rows,match', [
    ([('party', 'node')], 'header must be'),
    ([('label', 'node_id'), ('red', '')], 'row 2'),
    ([('label', 'node_id'), ('__unassigned__', 'x')], 'invalid anchor label'),
])
def test_read_anchors_invalid(write_csv, rows, match):
    path = write_csv('anchors.csv', rows)
    with pytest.raises(exceptions.InputError) as e:
        consensus.read_anchors(path)

    assert e.match(match)


def test_read_anchors_missing_file(tmpdir):
    with pytest.raises(exceptions.InputError) as e:
        consensus.read_anchors(tmpdir.join('none.csv').strpath)

    assert e.match('Cannot read anchors file')


def test_read_anchors_not_utf8(tmpdir):
    path = tmpdir.join('anchors.csv')
    path.write_binary(b'label,node_id\r\nred,\xff\xfe\r\n')
    with pytest.raises(exceptions.InputError) as e:
        consensus.read_anchors(path.strpath)

    assert e.match('not valid UTF-8')
    assert 2 == e.value.exit_code


def test_anchor_set_duplicate_label():
    with pytest.raises(exceptions.InputError):
        consensus.AnchorSet([('red', {'a'}), ('red', {'b'})])


def test_anchor_set_missing_from(two_triangles):
    anchors = consensus.AnchorSet([('red', {'a', 'zz'}), ('blue', {'d'})])
    assert {'red': ['zz']} == anchors.missing_from(two_triangles)


#####
# Cluster matching
#####
def test_match_clusters_bijective(two_triangles):
    p = community.Partition.from_communities([{'a', 'b', 'c'},
                                              {'d', 'e', 'f'}])
    anchors = consensus.AnchorSet([('red', {'a'}), ('blue', {'e'})])
    pr = centrality.pagerank(two_triangles)

    assert {'red': p['a'], 'blue': p['e']} == consensus.match_clusters(
        p, two_triangles, anchors, pr)


def test_match_clusters_absent_label(two_triangles):
    p = community.Partition.from_communities([{'a', 'b', 'c'},
                                              {'d', 'e', 'f'}])
    anchors = consensus.AnchorSet([('red', {'a'}), ('green', {'zz'})])
    pr = centrality.pagerank(two_triangles)

    assert {'red': p['a']} == consensus.match_clusters(
        p, two_triangles, anchors, pr)


def test_match_clusters_split_anchors(two_triangles):
    """A label follows its highest-PageRank anchor."""
    p = community.Partition.from_communities([{'a', 'b', 'c'},
                                              {'d', 'e', 'f'}])
    anchors = consensus.AnchorSet([('red', {'a', 'e'})])
    scores = {n: 0.1 for n in two_triangles.nodes}
    scores['e'] = 0.3

    assert {'red': p['e']} == consensus.match_clusters(
        p, two_triangles, anchors, _pagerank(scores))


def test_match_clusters_conflict(two_triangles):
    """Two labels on one community: the higher-PageRank claim wins."""
    p = community.Partition.from_communities([{'a', 'b', 'c'},
                                              {'d', 'e', 'f'}])
    anchors = consensus.AnchorSet([('red', {'a'}), ('blue', {'b'})])
    scores = {n: 0.1 for n in two_triangles.nodes}
    scores['b'] = 0.2

    assert {'blue': p['b']} == consensus.match_clusters(
        p, two_triangles, anchors, _pagerank(scores))


def test_match_clusters_conflict_tie(two_triangles):
    """Equal PageRank: the earlier label keeps the community."""
    p = community.Partition.from_communities([{'a', 'b', 'c'},
                                              {'d', 'e', 'f'}])
    anchors = consensus.AnchorSet([('red', {'b'}), ('blue', {'a'})])
    scores = {n: 0.1 for n in two_triangles.nodes}

    assert {'red': p['a']} == consensus.match_clusters(
        p, two_triangles, anchors, _pagerank(scores))


#####
# Consensus clustering
#####
def test_consensus_single_run(small_planted):
    """N=1, epsilon=0 reproduces the labelled communities of the run."""
    g, _, anchors = small_planted
    cc = consensus.consensus_cluster(g, n_runs=1, epsilon=0.0,
                                     anchors=anchors, master_seed=3)
    p = community.louvain(g, consensus.derive_seed(3, 0))
    pr = centrality.pagerank(g)
    matched = consensus.match_clusters(p, g, anchors, pr)

    expected = {label: p.communities[c] for label, c in matched.items()}
    assert expected == {label: members for label, members
                        in cc.clusters.items() if members}
    assert p == cc.first_partition


def test_consensus_planted_cliques(planted):
    """Default parameters recover four planted cliques completely."""
    g, groups, anchors = planted
    cc = consensus.consensus_cluster(g, n_runs=100, epsilon=0.05,
                                     anchors=anchors, master_seed=0)

    assert frozenset() == cc.unassigned
    for i, members in enumerate(groups):
        assert frozenset(members) == cc.clusters[f'party{i}']
    assert 100 == len(cc.runs)
    assert 95 == consensus.stable_threshold(cc.n_runs, cc.epsilon)

    again = consensus.consensus_cluster(g, n_runs=100, epsilon=0.05,
                                        anchors=anchors, master_seed=0)
    assert cc.rows() == again.rows()
    assert cc.runs == again.runs


def test_consensus_invariants(rng):
    """Clusters are disjoint and cover the graph with the unassigned."""
    g = conftest.random_digraph(rng, 20, 0.15, isolated=False)
    nodes = g.nodes
    anchors = consensus.AnchorSet([('x', {nodes[0]}), ('y', {nodes[-1]})])
    cc = consensus.consensus_cluster(g, n_runs=10, epsilon=0.2,
                                     anchors=anchors)

    seen = set()
    for members in cc.clusters.values():
        assert not seen & members
        seen |= members
    assert set(g.nodes) == seen | cc.unassigned
    assert not seen & cc.unassigned
    for node in seen:
        assert cc.stability[node] >= 1 - 0.2


def test_consensus_workers_agree(small_planted):
    """Parallel execution gives the same result as a single process."""
    g, _, anchors = small_planted
    serial = consensus.consensus_cluster(g, n_runs=8, anchors=anchors,
                                         master_seed=5, workers=1)
    parallel = consensus.consensus_cluster(g, n_runs=8, anchors=anchors,
                                           master_seed=5, workers=2)

    assert serial.rows() == parallel.rows()
    assert serial.runs == parallel.runs
    assert serial.first_partition == parallel.first_partition


def test_consensus_missing_anchor_warns(small_planted, caplog):
    g, groups, _ = small_planted
    anchors = consensus.AnchorSet([('p0', {groups[0][3]}),
                                   ('ghost', {'nobody'})])
    with caplog.at_level(logging.WARNING):
        cc = consensus.consensus_cluster(g, n_runs=3, anchors=anchors)

    assert frozenset() == cc.clusters['ghost']
    assert 'Anchors of "ghost" not in graph' in caplog.text
    assert 'Anchor label "ghost" matched no cluster' in caplog.text


@pytest.mark.parametrize('kwargs', [
    {'n_runs': 0},
    {'epsilon': 1.0},
    {'epsilon': -0.1},
    {'master_seed': -1},
])
def test_consensus_bad_parameters(two_triangles, kwargs):
    with pytest.raises(exceptions.ConfigError):
        consensus.consensus_cluster(two_triangles, **kwargs)


#####
# Cluster files
#####
def test_from_assignment(two_triangles):
    cc = consensus.ConsensusClustering.from_assignment(
        two_triangles, {'a': 'red', 'b': 'red', 'd': 'blue',
                        'e': consensus.UNASSIGNED})

    assert frozenset({'a', 'b'}) == cc.clusters['red']
    assert frozenset({'c', 'e', 'f'}) == cc.unassigned
    assert ('blue', 'red') == cc.labels
    assert 'blue' == cc.label_of('d')
    assert cc.label_of('c') is None


def test_read_clusters(write_csv, two_triangles):
    path = write_csv('clusters.csv', [
        ('node_id', 'label', 'stability'), ('a', 'red', '0.97'),
        ('b', 'red', '1.0'), ('c', '__unassigned__', '0.4')])
    cc = consensus.read_clusters(path, two_triangles)

    assert frozenset({'a', 'b'}) == cc.clusters['red']
    assert 0.97 == cc.stability['a']
    assert 0.4 == cc.stability['c']
    assert 0.0 == cc.stability['d']


def test_read_clusters_unknown_node(write_csv, two_triangles):
    path = write_csv('clusters.csv', [('node_id', 'label'), ('zz', 'red')])
    with pytest.raises(exceptions.InputError) as e:
        consensus.read_clusters(path, two_triangles)

    assert e.match('unknown node ids: zz')
    assert 2 == e.value.exit_code


def test_read_clusters_not_utf8(tmpdir, two_triangles):
    path = tmpdir.join('clusters.csv')
    path.write_binary(b'node_id,label\r\na,\xff\r\n')
    with pytest.raises(exceptions.InputError) as e:
        consensus.read_clusters(path.strpath, two_triangles)

    assert e.match('not valid UTF-8')


def test_read_clusters_bad_stability(write_csv, two_triangles):
    path = write_csv('clusters.csv', [
        ('node_id', 'label', 'stability'), ('a', 'red', 'high')])
    with pytest.raises(exceptions.ParseError) as e:
        consensus.read_clusters(path, two_triangles)

    assert 2 == e.value.row


def test_rows_sorted(two_triangles):
    cc = consensus.ConsensusClustering.from_assignment(
        two_triangles, {'e': 'b', 'd': 'b', 'a': 'a'})
    labels = [(label, node) for node, label, _ in cc.rows()]
    assert sorted(labels) == labels
