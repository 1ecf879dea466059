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

__author__ = 'The polargraph Authors'
__version__ = '0.1.0.dev1'
__license__ = 'Apache 2.0'
__email__ = 'polargraph-dev@googlegroups.com'
__description__ = 'Polarized community detection and per-cluster structure metrics for interaction networks'  # noqa: E501
__uri__ = 'https://github.com/polargraph/polargraph'
