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
"""Interface definitions for polargraph inputs and report artifacts.

Anything that feeds interactions into the pipeline provides
:py:class:`IInteractionSource`; anything written into a report bundle
provides :py:class:`IArtifact`.
"""

from zope.interface import Attribute
from zope.interface import Interface


class IInteractionSource(Interface):
    """Supply aggregated interactions to the graph builder.

    Args:
        path (str): Where the interactions are read from.
        kind (str): ``events`` for one row per interaction or ``edges``
            for pre-aggregated ``source,target,weight`` rows.
    """
    path = Attribute('Location of the interaction log.')
    kind = Attribute('Either "events" or "edges".')

    def read():
        """Return aggregated :class:`polargraph.graph.WeightedEdge` items.

        Edges must be sorted by ``(source, target)`` with one entry per
        ordered pair.
        """


class IArtifact(Interface):
    """A single CSV table in a report bundle.

    Rows are written in the order :py:meth:`rows` yields them; artifacts
    are responsible for their own deterministic ordering and number
    formatting so bundles are byte-identical across runs.
    """
    filename = Attribute('File name relative to the bundle directory.')
    header = Attribute('Sequence of column names.')

    def rows():
        """Yield sequences of already-formatted cell values."""
