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
Command line entry point.

Three subcommands share one configuration model (see
:mod:`polargraph.config`):

* ``ingest`` aggregates a raw interaction log into ``edges.csv``;
* ``analyze`` runs the whole pipeline and writes the report bundle;
* ``metrics`` recomputes ``profiles.csv`` for a given cluster file.

Example:

.. code-block:: bash

    $ polargraph ingest -i retweets.csv --out bundle/
    $ polargraph analyze -i retweets.csv --anchors parties.csv --out bundle/
    $ polargraph metrics -i retweets.csv --clusters bundle/clusters.csv \\
        --out bundle/

Exit codes: 0 on success, 1 when the pipeline fails, 2 on usage or
input errors.
"""

import contextlib
import functools
import hashlib
import logging
import os
from typing import NamedTuple

import click

from polargraph import __version__ as version
from polargraph import artifacts
from polargraph import centrality
from polargraph import config as config_mod
from polargraph import consensus
from polargraph import exceptions
from polargraph import graph
from polargraph import report
from polargraph import topology


@contextlib.contextmanager
def _stage(name):
    """Turn errors raised while running ``name`` into an exit code."""
    try:
        yield
    except exceptions.PolargraphError as e:
        logging.error(f'Stage "{name}" failed: {e}')
        raise SystemExit(e.exit_code)
    except OSError as e:
        logging.error(f'Stage "{name}" failed: {e}')
        raise SystemExit(2)
    except Exception as e:
        logging.error(f'Stage "{name}" failed unexpectedly.', exc_info=e)
        raise SystemExit(1)


def _file_digest(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(functools.partial(f.read, 1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def _configure(config_path, **flags):
    overrides = {k: v for k, v in flags.items()
                 if v is not None and v != ()}
    with _stage('configure'):
        file_config = {}
        if config_path:
            file_config = config_mod.load_config(config_path)
        config = config_mod.RunConfig.from_sources(file_config, overrides)
        if not config.input:
            raise exceptions.ConfigError('no input file given (--input)')
    config_mod.setup_logging(config)
    return config


class _Graphs(NamedTuple):
    edges: list
    full: graph.DirectedGraph
    giant: graph.DirectedGraph
    analysis: graph.DirectedGraph


def _build_graphs(config):
    """Read the input and build the thresholded graphs."""
    with _stage('read'):
        source = graph.CsvInteractionSource(config.input, config.input_kind)
        edges = source.read()
    with _stage('build'):
        full = graph.build_graph(edges, min_weight=config.min_weight)
        if not full.number_of_nodes:
            raise exceptions.GraphError(
                f'no edge reaches min_weight={config.min_weight}')
        giant = graph.giant_component(full)
    analysis = giant if config.giant_component else full
    logging.info(
        f'Graph: {full.number_of_nodes} nodes, {full.number_of_edges} '
        f'edges; giant component {giant.number_of_nodes} nodes; '
        f'analysing {analysis.number_of_nodes} nodes.')
    return _Graphs(edges, full, giant, analysis)


#####
# Subcommand option sets
#####
def _common_options(func):
    options = [
        click.option('-c', '--config', 'config_path',
                     type=click.Path(exists=True, dir_okay=False),
                     help='TOML configuration file.'),
        click.option('-i', '--input', 'input',
                     help='Interaction log CSV.'),
        click.option('--kind', 'input_kind',
                     type=click.Choice(graph.INPUT_KINDS),
                     help='events: one row per interaction; edges: '
                          'pre-aggregated source,target,weight rows.'),
        click.option('--out', help='Output directory.'),
        click.option('--log-level', help='Logging level, e.g. debug.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _graph_options(func):
    options = [
        click.option('--min-weight', type=int,
                     help='Drop pairs with fewer interactions (default 3).'),
        click.option('--giant-component/--full-graph', default=None,
                     help='Analyse only the largest weakly connected '
                          'component (default: full graph).'),
        click.option('--apl-mode', type=click.Choice(topology.APL_MODES),
                     help='Average path length convention of the "l" '
                          'profile column (default paper-literal); both '
                          'conventions are reported as well.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(version, prog_name='polargraph')
def run():
    """Polarized community detection for interaction networks."""


@run.command()
@_common_options
def ingest(config_path, **flags):
    """Aggregate an interaction log into edges.csv."""
    config = _configure(config_path, **flags)
    cmd_ingest(config)


def cmd_ingest(config):
    with _stage('read'):
        source = graph.CsvInteractionSource(config.input, config.input_kind)
        edges = source.read()
    with _stage('write'):
        artifacts.write_bundle(
            [artifacts.EdgeListArtifact('edges.csv', edges)], config.out)
    events = sum(e.weight for e in edges)
    click.echo(f'{events} events aggregated into {len(edges)} edges.')


@run.command()
@_common_options
@_graph_options
@click.option('--anchors', help='CSV of label,node_id anchor rows.')
@click.option('--runs', type=int, help='Louvain executions (default 100).')
@click.option('--epsilon', type=float,
              help='Tolerated fraction of dissenting runs (default 0.05).')
@click.option('--seed', type=int, help='Master seed (default 0).')
@click.option('--damping', type=float, help='PageRank damping (0.85).')
@click.option('--weighted-pagerank/--unweighted-pagerank', default=None,
              help='Split PageRank mass by edge weight.')
@click.option('--weak-ties-include-unassigned/--weak-ties-clusters-only',
              default=None,
              help='Keep edges touching unassigned nodes in the weak-ties '
                   'subnetwork.')
@click.option('--matrix-include-unassigned/--matrix-clusters-only',
              default=None,
              help='Add an __unassigned__ column to the interaction matrix.')
@click.option('--top-k', type=int, help='Top nodes per cluster (5).')
@click.option('--weak-ties-top-k', type=int,
              help='Rows of weak_ties_pagerank.csv (25).')
@click.option('--ego', multiple=True,
              help='Write the ego network of this node (repeatable).')
@click.option('--workers', type=int,
              help='Processes for the Louvain ensemble (default: CPU count).')
def analyze(config_path, **flags):
    """Detect stable clusters and write the full report bundle."""
    config = _configure(config_path, **flags)
    cmd_analyze(config)


def _manifest(config, graphs, cc, anchors_digest):
    clustered = len(cc.assigned)
    first = cc.runs[0]
    analysis = graphs.analysis
    return {
        'polargraph': {'version': version},
        'parameters': config.manifest_dict(),
        'input': {
            'file': os.path.basename(config.input),
            'sha256': _file_digest(config.input),
            'anchors_sha256': anchors_digest,
        },
        'graph': {
            'interactions': sum(e.weight for e in graphs.edges),
            'pairs': len(graphs.edges),
            'nodes': graphs.full.number_of_nodes,
            'edges': graphs.full.number_of_edges,
            'giant_component_nodes': graphs.giant.number_of_nodes,
            'giant_component_edges': graphs.giant.number_of_edges,
            'analysed_nodes': analysis.number_of_nodes,
            'analysed_edges': analysis.number_of_edges,
        },
        'detection': {
            'threshold_runs': consensus.stable_threshold(
                cc.n_runs, cc.epsilon),
            'first_run_modularity': first.modularity,
            'first_run_communities': first.communities,
            'stable_nodes': clustered,
            'stable_fraction': clustered / analysis.number_of_nodes,
            'unassigned_nodes': len(cc.unassigned),
        },
        'clusters': {label: len(cc.clusters[label])
                     for label in cc.labels_by_size()},
    }


def cmd_analyze(config):
    if not config.anchors:
        with _stage('configure'):
            raise exceptions.ConfigError('no anchors file given (--anchors)')
    with _stage('read'):
        anchors = consensus.read_anchors(config.anchors)
        anchors_digest = _file_digest(config.anchors)
    graphs = _build_graphs(config)
    analysis = graphs.analysis

    with _stage('pagerank'):
        pr_config = centrality.PageRankConfig(
            damping=config.damping, weighted=config.weighted_pagerank)
        pr = centrality.pagerank(graphs.full, pr_config)

    with _stage('detect'):
        cc = consensus.consensus_cluster(
            analysis, n_runs=config.runs, epsilon=config.epsilon,
            anchors=anchors, master_seed=config.seed, pagerank=pr,
            workers=config.workers)

    with _stage('report'):
        profiles = report.cluster_profiles(analysis, cc)
        matrix = report.interaction_matrix(
            analysis, cc, include_unassigned=config.matrix_include_unassigned)
        top = report.top_nodes_report(analysis, cc, pr, k=config.top_k)
        sizes = report.cluster_size_distribution(cc.first_partition)
        weak = centrality.weak_ties_subgraph(
            analysis, cc,
            include_unassigned=config.weak_ties_include_unassigned)
        weak_pr = None
        if weak.number_of_nodes:
            weak_pr = centrality.pagerank(weak, pr_config)
        bundle = [
            artifacts.ClustersArtifact(cc),
            artifacts.ProfilesArtifact(profiles, apl_mode=config.apl_mode),
            artifacts.InteractionMatrixArtifact(matrix),
            artifacts.InteractionMatrixArtifact(matrix, raw=True),
            artifacts.TopNodesArtifact(top),
            artifacts.ClusterSizesArtifact(sizes),
            artifacts.RunsArtifact(cc.runs),
            artifacts.PageRankArtifact(pr),
            artifacts.PageRankArtifact(
                weak_pr, filename='weak_ties_pagerank.csv',
                k=config.weak_ties_top_k, ranked=True),
            artifacts.EdgeListArtifact(
                'giant_component.csv', graphs.giant.edge_list()),
        ]
        bundle.extend(artifacts.profile_artifacts(profiles))
        for center in dict.fromkeys(config.ego):
            bundle.append(artifacts.EdgeListArtifact(
                f'ego_{artifacts.safe_name(center)}.csv',
                report.ego_network(analysis, center).edge_list()))
        manifest = _manifest(config, graphs, cc, anchors_digest)

    with _stage('write'):
        artifacts.write_bundle(bundle, config.out, manifest=manifest)
    click.echo(
        f'{len(cc.clusters)} clusters, {len(cc.assigned)} stable nodes, '
        f'{len(cc.unassigned)} unassigned; bundle in {config.out}')


@run.command()
@_common_options
@_graph_options
@click.option('--clusters', 'clusters_path', required=True,
              type=click.Path(exists=True, dir_okay=False),
              help='node_id,label[,stability] CSV, e.g. a clusters.csv.')
def metrics(config_path, clusters_path, **flags):
    """Recompute cluster profiles for an existing assignment."""
    config = _configure(config_path, **flags)
    cmd_metrics(config, clusters_path)


def cmd_metrics(config, clusters_path):
    analysis = _build_graphs(config).analysis
    with _stage('read'):
        cc = consensus.read_clusters(clusters_path, analysis)
    if not cc.clusters:
        logging.warning('Every node is unassigned; no profiles to compute.')
    with _stage('report'):
        profiles = report.cluster_profiles(analysis, cc)
    with _stage('write'):
        artifacts.write_bundle(
            [artifacts.ProfilesArtifact(profiles, apl_mode=config.apl_mode)],
            config.out)
    click.echo(f'{len(profiles)} cluster profiles written to {config.out}')


if __name__ == '__main__':
    run()
