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
CSV tables of a report bundle and the writer that puts them on disk.

All files are UTF-8, RFC 4180 (CRLF line endings, minimal quoting).
Undefined metrics are written as empty fields.
"""

import collections
import csv
import hashlib
import logging
import os
import re
import shutil
import tempfile

import toml
from zope.interface import implementer

from polargraph import centrality
from polargraph import exceptions
from polargraph import interfaces


MANIFEST_FILENAME = 'run_manifest.toml'


def fmt(value, digits=6):
    if value is None:
        return ''
    return f'{value:.{digits}f}'


def safe_name(name):
    """File-name-safe rendering of a label or node id.

    A name that had to be rewritten gets a short digest of the original
    appended, so ``x/y`` and ``x_y`` never share a file.
    """
    safe = re.sub(r'[^A-Za-z0-9._-]', '_', name)
    if safe == name:
        return name
    digest = hashlib.sha256(name.encode('utf-8')).hexdigest()[:8]
    return f'{safe}-{digest}'


@implementer(interfaces.IArtifact)
class CsvArtifact:
    filename = None
    header = ()

    def rows(self):
        raise NotImplementedError


class EdgeListArtifact(CsvArtifact):
    """Weighted edges sorted by (source, target)."""
    header = ('source', 'target', 'weight')

    def __init__(self, filename, edges):
        self.filename = filename
        self.edges = edges

    def rows(self):
        for source, target, weight in sorted(self.edges):
            yield (source, target, str(weight))


class ClustersArtifact(CsvArtifact):
    filename = 'clusters.csv'
    header = ('node_id', 'label', 'stability')

    def __init__(self, cc):
        self.cc = cc

    def rows(self):
        for node, label, stability in self.cc.rows():
            yield (node, label, fmt(stability))


class ProfilesArtifact(CsvArtifact):
    """``l`` follows ``apl_mode``; both conventions get their own column."""
    filename = 'profiles.csv'
    header = ('label', 'N', 'E', 'G_in', 'C_in', 'Cl', 'l', 'l_paper_literal',
              'l_reachable_only', 'k_max', 'k_avg', 'k_std')

    def __init__(self, profiles, apl_mode='paper-literal'):
        self.profiles = profiles
        self.apl_mode = apl_mode

    def rows(self):
        for p in self.profiles:
            selected = (p.path_length if self.apl_mode == 'paper-literal'
                        else p.path_length_reachable)
            yield (p.label, str(p.nodes), str(p.edges), fmt(p.gini_in),
                   fmt(p.centralization_in), fmt(p.clustering),
                   fmt(selected), fmt(p.path_length),
                   fmt(p.path_length_reachable),
                   str(p.k_max), fmt(p.k_avg), fmt(p.k_std))


class InteractionMatrixArtifact(CsvArtifact):
    """Normalized matrix at 2 decimals, or raw integer weights."""
    def __init__(self, matrix, raw=False):
        self.matrix = matrix
        self.raw = raw
        self.filename = ('interaction_matrix_raw.csv' if raw
                         else 'interaction_matrix.csv')
        self.header = ('cluster',) + matrix.columns

    def rows(self):
        values = self.matrix.raw if self.raw else self.matrix.normalized
        for label, row in zip(self.matrix.labels, values):
            if self.raw:
                yield (label,) + tuple(str(int(v)) for v in row)
            else:
                yield (label,) + tuple(fmt(v, 2) for v in row)


class TopNodesArtifact(CsvArtifact):
    filename = 'top_nodes.csv'
    header = ('label', 'rank', 'node_id', 'pagerank')

    def __init__(self, table):
        self.table = table

    def rows(self):
        for label, ranked in self.table.items():
            for rank, (node, score) in enumerate(ranked, start=1):
                yield (label, str(rank), node, fmt(score))


class PageRankArtifact(CsvArtifact):
    """Nodes by descending score; ``k`` keeps only the top of the list.

    ``ranked`` adds a leading 1-based ``rank`` column. ``pr=None``
    writes the header only.
    """
    def __init__(self, pr, filename='pagerank.csv', k=None, ranked=False):
        self.pr = pr
        self.filename = filename
        self.k = k
        self.ranked = ranked
        self.header = (('rank',) if ranked else ()) + ('node_id', 'pagerank')

    def rows(self):
        if self.pr is None:
            return
        k = len(self.pr) if self.k is None else self.k
        ranked = centrality.rank_nodes(self.pr, k=k)
        for rank, (node, score) in enumerate(ranked, start=1):
            row = (node, fmt(score))
            yield (str(rank),) + row if self.ranked else row


class ClusterSizesArtifact(CsvArtifact):
    filename = 'cluster_sizes.csv'
    header = ('size', 'count')

    def __init__(self, distribution):
        self.distribution = distribution

    def rows(self):
        for size, count in self.distribution.items():
            yield (str(size), str(count))


class RunsArtifact(CsvArtifact):
    filename = 'runs.csv'
    header = ('run', 'seed', 'modularity', 'communities', 'matched')

    def __init__(self, runs):
        self.runs = runs

    def rows(self):
        for run in self.runs:
            yield (str(run.index), str(run.seed), fmt(run.modularity),
                   str(run.communities), ';'.join(run.matched))


class LorenzArtifact(CsvArtifact):
    header = ('X', 'Y')

    def __init__(self, label, curve):
        self.filename = f'lorenz_{safe_name(label)}.csv'
        self.curve = curve

    def rows(self):
        for x, y in self.curve.points:
            yield (fmt(x), fmt(y))


class InDegreeArtifact(CsvArtifact):
    header = ('k', 'count', 'fraction', 'cumulative')

    def __init__(self, label, distribution):
        self.filename = f'indegree_{safe_name(label)}.csv'
        self.distribution = distribution

    def rows(self):
        for k, count, fraction, cumulative in self.distribution.rows():
            yield (str(k), str(count), fmt(fraction), fmt(cumulative))


class KCoreArtifact(CsvArtifact):
    header = ('k', 'node_count')

    def __init__(self, label, cores):
        self.filename = f'kcore_{safe_name(label)}.csv'
        self.cores = cores

    def rows(self):
        for k, count in self.cores.distribution().items():
            yield (str(k), str(count))


def profile_artifacts(profiles):
    """Per-cluster Lorenz, in-degree and k-core tables."""
    for profile in profiles:
        if profile.lorenz is not None:
            yield LorenzArtifact(profile.label, profile.lorenz)
        yield InDegreeArtifact(profile.label, profile.in_degrees)
        yield KCoreArtifact(profile.label, profile.cores)


def write_csv(path, artifact):
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\r\n')
        writer.writerow(artifact.header)
        writer.writerows(artifact.rows())


def write_bundle(artifacts, out_dir, manifest=None):
    """Write ``artifacts`` (and the manifest) into ``out_dir``.

    Files are staged in a temporary sibling directory and moved into
    ``out_dir`` only once every table was written, so a failure leaves
    no partial bundle behind.

    Returns:
        Sorted list of written file names.
    Raises:
        polargraph.exceptions.InputError: if two tables share a file
            name; nothing is written then.
    """
    artifacts = list(artifacts)
    counts = collections.Counter(a.filename for a in artifacts)
    if manifest is not None:
        counts[MANIFEST_FILENAME] += 1
    clashes = sorted(name for name, count in counts.items() if count > 1)
    if clashes:
        raise exceptions.InputError(
            f'several tables map to the same file: {", ".join(clashes)}')

    out_dir = os.path.abspath(out_dir)
    parent = os.path.dirname(out_dir)
    os.makedirs(parent, exist_ok=True)
    staging = tempfile.mkdtemp(prefix='.polargraph-', dir=parent)
    try:
        for artifact in artifacts:
            write_csv(os.path.join(staging, artifact.filename), artifact)
        if manifest is not None:
            path = os.path.join(staging, MANIFEST_FILENAME)
            with open(path, 'w', encoding='utf-8') as f:
                toml.dump(manifest, f)
        names = sorted(os.listdir(staging))
        os.makedirs(out_dir, exist_ok=True)
        for name in names:
            os.replace(os.path.join(staging, name), os.path.join(out_dir, name))
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    logging.info(f'Wrote {len(names)} files to {out_dir}.')
    return names
