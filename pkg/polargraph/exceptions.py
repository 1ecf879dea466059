# -*- coding: utf-8 -*-
# Copyright (c) 2026 The polargraph Authors
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


class PolargraphError(Exception):
    """General polargraph pipeline error."""
    exit_code = 1


class InputError(PolargraphError):
    """Unreadable or invalid user-supplied input."""
    exit_code = 2


class ParseError(InputError):
    """Malformed row in a CSV input.

    Args:
        message (str): What is wrong with the row.
        row (int): 1-based row number, the header being row 1.
        path (str): Optional file the row was read from.
    """
    def __init__(self, message, row=None, path=None):
        self.row = row
        self.path = path
        location = ''
        if path:
            location += f'{path}: '
        if row is not None:
            location += f'row {row}: '
        super().__init__(f'{location}{message}')


class ConfigError(InputError):
    """Invalid run configuration value."""


class GraphError(PolargraphError):
    """Invalid graph operation, e.g. unknown node ids."""


class CommunityError(PolargraphError):
    """Community detection cannot proceed."""


class TopologyError(PolargraphError):
    """A structural metric is undefined for the given graph."""
